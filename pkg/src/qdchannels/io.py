"""JSON file formats.

Matrices are row-major nested lists of ``[re, im]`` pairs.

* channel: ``{"dim": n, "kraus": [matrix, ...]}``
* state:   ``{"dims": [m, n], "rho": matrix}``

A single document may carry both (failure payloads do), and each reader
ignores the other's keys.
"""
import json
from pathlib import Path

import numpy as np

from .channel import DecoheringParams, IsotropicParams, QuantumChannel, QubitCPUParams
from .discord import BipartiteState
from .errors import ParseError


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: not a nested list of [re, im] pairs ({exc})") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError(f"{what}: expected shape (n, n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{what}: non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(ch: QuantumChannel) -> dict:
    return {"dim": ch.dim, "kraus": [matrix_to_json(k) for k in ch.kraus]}


def channel_from_dict(d) -> QuantumChannel:
    if not isinstance(d, dict) or "dim" not in d or "kraus" not in d:
        raise ParseError("channel document needs 'dim' and 'kraus'")
    n = d["dim"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"'dim' must be a positive integer, got {n!r}")
    if not isinstance(d["kraus"], list) or not d["kraus"]:
        raise ParseError("'kraus' must be a nonempty list")
    ops = [matrix_from_json(k, f"kraus[{i}]") for i, k in enumerate(d["kraus"])]
    for i, k in enumerate(ops):
        if k.shape != (n, n):
            raise ParseError(f"kraus[{i}] has shape {k.shape}, expected ({n}, {n})")
    return QuantumChannel(tuple(ops))


def state_to_dict(s: BipartiteState) -> dict:
    return {"dims": list(s.dims), "rho": matrix_to_json(s.rho)}


def state_from_dict(d) -> BipartiteState:
    if not isinstance(d, dict) or "dims" not in d or "rho" not in d:
        raise ParseError("state document needs 'dims' and 'rho'")
    dims = d["dims"]
    if (not isinstance(dims, list) or len(dims) != 2
            or not all(isinstance(x, int) and x >= 1 for x in dims)):
        raise ParseError(f"'dims' must be two positive integers, got {dims!r}")
    rho = matrix_from_json(d["rho"], "rho")
    if rho.shape[0] != dims[0] * dims[1]:
        raise ParseError(f"rho has size {rho.shape[0]}, expected {dims[0] * dims[1]}")
    return BipartiteState(tuple(dims), rho)


def params_to_dict(p) -> dict:
    if isinstance(p, IsotropicParams):
        return {"family": "isotropic", "t": p.t, "branch": p.branch.value, "u": matrix_to_json(p.u)}
    if isinstance(p, DecoheringParams):
        return {
            "family": "decohering",
            "povm": [matrix_to_json(w) for w in p.povm],
            "basis": matrix_to_json(p.basis),
        }
    if isinstance(p, QubitCPUParams):
        return {
            "family": "qubit-cpu",
            "lambda": p.lam,
            "alpha": [p.alpha.real, p.alpha.imag],
            "beta": [p.beta.real, p.beta.imag],
            "gamma": [p.gamma.real, p.gamma.imag],
            "u": matrix_to_json(p.u),
        }
    raise TypeError(f"unknown parameter type {type(p).__name__}")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, offset=exc.colno) from None


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_channel(path) -> QuantumChannel:
    return channel_from_dict(read_json(path))


def read_state(path) -> BipartiteState:
    return state_from_dict(read_json(path))
