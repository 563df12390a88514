"""Command-line front end.

Exit codes: 0 on success, 1 when a verification campaign records a failure,
2 on any input error. Errors go to stderr.
"""
import argparse
import sys

import numpy as np

from . import io, samplers
from .bloch import channel_bloch_map, emit_csv
from .campaigns import RunConfig, TheoremId, verify
from .channel import Branch, IsotropicParams, make_isotropic
from .classify import Verdict, both_directions_report, classify
from .discord import DiscordConfig, discord_b, is_zero_discord_b
from .errors import QDChannelError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULTS = {"tol": 1e-9, "format": "json", "seed": 0}


def _dims(text):
    try:
        m, n = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'm,n', got {text!r}") from None
    return m, n


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qdchannels", parents=[common],
                                     description="Local channels and zero quantum discord.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a channel file")
    p.add_argument("channel")

    p = sub.add_parser("discord", parents=[common], help="numerical discord of a state file")
    p.add_argument("state")
    p.add_argument("--swap-parties", action="store_true", help="measure A instead of B")

    p = sub.add_parser("zeroqd", parents=[common], help="block criterion for zero discord")
    p.add_argument("state")

    p = sub.add_parser("verify", parents=[common], help="run a verification campaign")
    p.add_argument("theorem", choices=[t.value for t in TheoremId])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", type=_dims, default=(2, 3))
    p.add_argument("--out-dir", default="qd-runs")

    p = sub.add_parser("sample", parents=[common], help="draw a random state or channel")
    p.add_argument("kind", choices=("state", "zeroqd-state", "channel", "isotropic", "decohering", "qubit-cpu"))
    p.add_argument("--dims", type=_dims, default=(2, 2), help="m,n for states")
    p.add_argument("--n", type=int, default=2, help="channel dimension")
    p.add_argument("--rank", type=int, default=2, help="Kraus rank for 'channel'")
    p.add_argument("--t", type=float, help="fixed isotropic t")
    p.add_argument("--branch", choices=[b.value for b in Branch])
    p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("bloch-map", parents=[common], help="Bloch-ball affine map of a qubit channel")
    p.add_argument("channel")
    p.add_argument("--emit-csv", metavar="PATH")
    return parser


def _emit(obj, fmt, out=None):
    if fmt == "json":
        text = io.dumps(obj)
    else:
        text = "".join(f"{k}: {v}\n" for k, v in obj.items())
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_classify(args):
    ch = io.read_channel(args.channel)
    cls = classify(ch, tol=max(args.tol, 1e-8), seed=args.seed)
    out = {
        "verdict": cls.verdict.value,
        "dim": ch.dim,
        "residual": cls.residual,
        "params": io.params_to_dict(cls.params) if cls.params is not None else None,
        "witness": None,
        "note": cls.note,
    }
    if cls.witness is not None:
        out["witness"] = {
            "label": cls.witness.label,
            "residual": cls.witness.residual,
            "tries": cls.witness.tries,
            "state": io.state_to_dict(cls.witness.state),
        }
    if cls.verdict is not Verdict.CREATES_DISCORD:
        bd = both_directions_report(ch, cls)
        out["both_directions"] = bd.value
        if bd.diagnostic:
            out["diagnostic"] = bd.diagnostic
    if args.format == "text":
        out = {k: v for k, v in out.items() if k not in ("params", "witness")}
        if cls.witness is not None:
            out["witness"] = cls.witness.label
    _emit(out, args.format)
    return EXIT_OK


def _cmd_discord(args):
    s = io.read_state(args.state)
    if args.swap_parties:
        s = s.swapped()
    res = discord_b(s, DiscordConfig(seed=args.seed))
    out = {
        "party": "A" if args.swap_parties else "B",
        "discord": res.value,
        "converged": res.converged,
        "iterations": res.iterations,
    }
    if args.format == "json":
        out["basis"] = io.matrix_to_json(res.argmin_basis.vectors)
    _emit(out, args.format)
    return EXIT_OK


def _cmd_zeroqd(args):
    s = io.read_state(args.state)
    v = is_zero_discord_b(s, args.tol)
    _emit({"zero_discord": v.zero, "residual": v.residual, "witness": v.witness}, args.format)
    return EXIT_OK


def _cmd_verify(args):
    cfg = RunConfig(seed=args.seed, trials=args.trials, dims=args.dims, tol=args.tol,
                    out_format=args.format, out_dir=args.out_dir)
    report = verify(args.theorem, cfg)
    out = report.to_dict()
    if args.format == "text":
        out["failures"] = len(report.failures)
    _emit(out, args.format)
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    m, n = args.dims
    kind = args.kind
    if kind == "state":
        obj = io.state_to_dict(samplers.sample_random_state(m, n, rng))
    elif kind == "zeroqd-state":
        obj = io.state_to_dict(samplers.sample_zero_discord_state(m, n, seed=rng))
    elif kind == "channel":
        obj = io.channel_to_dict(samplers.sample_random_channel(args.n, args.rank, rng))
    elif kind == "isotropic":
        branch = Branch(args.branch) if args.branch else None
        p = samplers.sample_isotropic_params(args.n, rng, branch=branch)
        if args.t is not None:
            p = IsotropicParams(p.u, args.t, p.branch)
        obj = io.channel_to_dict(make_isotropic(p))
    elif kind == "decohering":
        obj = io.channel_to_dict(samplers.sample_decohering(args.n, rng))
    else:
        obj = io.channel_to_dict(samplers.sample_qubit_cpu(rng))
    _emit(obj, "json", args.out)
    return EXIT_OK


def _cmd_bloch_map(args):
    ch = io.read_channel(args.channel)
    m = channel_bloch_map(ch)
    out = {
        "linear": m.linear.tolist(),
        "offset": m.offset.tolist(),
        "det": float(np.linalg.det(m.linear)),
        "rank": int(np.linalg.matrix_rank(m.linear, tol=1e-9)),
    }
    if args.emit_csv:
        out["csv_rows"] = emit_csv(m, args.emit_csv)
    _emit(out, args.format)
    return EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "discord": _cmd_discord,
    "zeroqd": _cmd_zeroqd,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "bloch-map": _cmd_bloch_map,
}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    for key, value in DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return _COMMANDS[args.command](args)
    except (QDChannelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
