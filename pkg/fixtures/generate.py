"""Regenerate the shipped JSON fixtures: ``python3 fixtures/generate.py``."""
from pathlib import Path

import numpy as np

from qdchannels import io, samplers
from qdchannels.channel import (
    Branch,
    DecoheringParams,
    IsotropicParams,
    QubitCPUParams,
    amplitude_damping,
    make_decohering,
    make_isotropic,
    make_qubit_cpu,
)
from qdchannels.discord import BipartiteState
from qdchannels.matcore import matrix_unit

HERE = Path(__file__).parent


def bell() -> BipartiteState:
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    return BipartiteState((2, 2), np.outer(psi, psi.conj()))


def main():
    rng = np.random.default_rng(20240601)
    u3 = samplers.random_unitary(3, rng)
    io.write_json(HERE / "isotropic_n3.json",
                  io.channel_to_dict(make_isotropic(IsotropicParams(u3, 0.6, Branch.UNITARY))))
    io.write_json(HERE / "isotropic_transpose_n3.json",
                  io.channel_to_dict(make_isotropic(IsotropicParams(u3, -0.4, Branch.TRANSPOSE))))
    io.write_json(HERE / "decohering_n3.json",
                  io.channel_to_dict(samplers.sample_decohering(3, rng)))
    dephase = make_decohering(DecoheringParams(
        tuple(matrix_unit(k, k, 2) for k in range(2)), np.eye(2, dtype=complex)))
    io.write_json(HERE / "dephasing_n2.json", io.channel_to_dict(dephase))
    io.write_json(HERE / "qubit_cpu.json", io.channel_to_dict(make_qubit_cpu(
        QubitCPUParams(samplers.random_unitary(2, rng), 0.7, 0.2 + 0.1j, 0.5 - 0.3j, 0.4 + 0.2j))))
    io.write_json(HERE / "amplitude_damping.json", io.channel_to_dict(amplitude_damping(0.3)))
    io.write_json(HERE / "bell.json", io.state_to_dict(bell()))
    io.write_json(HERE / "zeroqd_2x3.json",
                  io.state_to_dict(samplers.sample_zero_discord_state(2, 3, seed=rng)))
    (HERE / "broken.json").write_text('{"dim": 2,\n "kraus": [1, 2,]\n}\n')


if __name__ == "__main__":
    main()
