import json

import numpy as np
import pytest

from qdchannels import io
from qdchannels.campaigns import RunConfig, TheoremId, sample_commutation_preserving_map, verify
from qdchannels.classify import classify, Verdict
from qdchannels.discord import is_zero_discord_b
from qdchannels.errors import UnsupportedDimension


def run(tid, **kw):
    kw.setdefault("out_dir", None)
    return verify(tid, RunConfig(**kw))


def test_t3_campaign():
    r = run("T3", dims=(2, 2), trials=200, seed=7)
    assert r.passes == 200 and not r.failures


def test_obs3_campaign():
    r = run(TheoremId.OBS3, trials=1000)
    assert r.passes == 1000 and r.max_residual < 1e-10


def test_obs1_campaign():
    assert run("OBS1", trials=500).ok


@pytest.mark.parametrize("tid", ["T1_FWD", "T2_FWD", "T4_RT", "T5_FWD", "P1"])
def test_forward_campaigns(tid):
    r = run(tid, dims=(2, 3), trials=40, seed=3)
    assert r.passes == 40, r.to_dict()


def test_t1_converse_campaign():
    r = run("T1_CONV", dims=(2, 3), trials=10, seed=1)
    assert r.passes >= 9


def test_p2_campaign():
    r = run("P2", trials=30, seed=2)
    assert r.ok, r.to_dict()


def test_report_invariant_and_schema():
    r = run("T3", dims=(2, 3), trials=5)
    d = r.to_dict()
    assert d["passes"] + len(d["failures"]) == d["trials"] == 5
    assert set(d) >= {"theorem", "trials", "passes", "failures"}


def test_dims_limits():
    with pytest.raises(UnsupportedDimension):
        run("T3", dims=(2, 6))
    with pytest.raises(UnsupportedDimension):
        run("T1_FWD", dims=(2, 2))


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(dims=(1, 3))


def test_failure_payloads_reproduce(tmp_path):
    # a tolerance below the numerical floor forces failures and payload dumps
    r = verify("T3", RunConfig(seed=5, trials=6, dims=(2, 3), tol=-1.0, out_dir=str(tmp_path)))
    assert r.passes == 0 and len(r.failures) == 6
    assert [f.seed for f in r.failures] == sorted(f.seed for f in r.failures)
    for f in r.failures:
        doc = io.read_json(f.payload)
        ch, image = io.channel_from_dict(doc), io.state_from_dict(doc)
        assert classify(ch).verdict is Verdict.COMPLETELY_DECOHERING
        assert is_zero_discord_b(image)
    assert (tmp_path / "seed-5").is_dir()


def test_campaigns_are_deterministic():
    a = run("T2_FWD", trials=20, seed=11).to_dict()
    b = run("T2_FWD", trials=20, seed=11).to_dict()
    assert json.dumps(a) == json.dumps(b)


def test_sampled_maps_are_commutativity_preserving():
    rng = np.random.default_rng(0)
    for _ in range(50):
        phi = sample_commutation_preserving_map(rng)
        v = np.linalg.eigh(rng.standard_normal((2, 2)))[1]
        a = v @ np.diag(rng.standard_normal(2)) @ v.T
        b = v @ np.diag(rng.standard_normal(2)) @ v.T
        fa, fb = phi(a), phi(b)
        assert np.linalg.norm(fa @ fb - fb @ fa) < 1e-10 * max(1, np.linalg.norm(fa) * np.linalg.norm(fb))
