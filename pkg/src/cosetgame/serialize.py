"""JSON strategy files.

Layout::

    {"n": 2, "k": 1,
     "channel": {"dimB": 4, "dimC": 1, "kraus": [matrix, ...]},
     "bob": {"0": [matrix, ...], ...},
     "charlie": {"0": [matrix, ...], ...}}

A matrix is a row-major list of rows of ``[re, im]`` pairs.  Keys of
``bob``/``charlie`` are indices into the canonical Gr_2(n,k) order; the
POVM elements follow the ascending canonical coset representatives.
"""

from __future__ import annotations

import json

import numpy as np

from . import game, gf2


class StrategyFormatError(ValueError):
    def __init__(self, pointer: str, msg: str):
        super().__init__(f"{pointer}: {msg}")
        self.pointer = pointer


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def matrix_from_json(data, pointer: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StrategyFormatError(pointer, f"not a numeric matrix ({exc})") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise StrategyFormatError(pointer, "expected rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def strategy_to_dict(s: game.Strategy) -> dict:
    return {
        "n": s.n,
        "k": s.k,
        "channel": {
            "dimB": s.channel.dim_b,
            "dimC": s.channel.dim_c,
            "kraus": [matrix_to_json(K) for K in s.channel.kraus],
        },
        "bob": {str(i): [matrix_to_json(E) for E in B] for i, B in enumerate(s.bob)},
        "charlie": {str(i): [matrix_to_json(E) for E in C] for i, C in enumerate(s.charlie)},
    }


def _field(data: dict, key: str, pointer: str):
    if not isinstance(data, dict) or key not in data:
        raise StrategyFormatError(f"{pointer}/{key}", "missing field")
    return data[key]


def strategy_from_dict(data: dict) -> game.Strategy:
    n = _field(data, "n", "")
    k = _field(data, "k", "")
    if not isinstance(n, int) or not 0 <= n <= 10:
        raise StrategyFormatError("/n", "n must be an integer in [0, 10]")
    if not isinstance(k, int) or not 0 <= k <= n:
        raise StrategyFormatError("/k", "k must be an integer in [0, n]")
    ch = _field(data, "channel", "")
    db = _field(ch, "dimB", "/channel")
    dc = _field(ch, "dimC", "/channel")
    kraus_raw = _field(ch, "kraus", "/channel")
    if not isinstance(kraus_raw, list) or not kraus_raw:
        raise StrategyFormatError("/channel/kraus", "expected a non-empty list")
    kraus = []
    for i, K in enumerate(kraus_raw):
        ptr = f"/channel/kraus/{i}"
        K = matrix_from_json(K, ptr)
        if K.shape != (db * dc, 1 << n):
            raise StrategyFormatError(ptr, f"shape {K.shape}, expected {(db * dc, 1 << n)}")
        kraus.append(K)
    try:
        channel = game.Channel(n, db, dc, tuple(kraus))
    except game.StrategyError as exc:
        raise StrategyFormatError("/channel/kraus", str(exc)) from None

    N = gf2.gaussian_binomial(n, k)
    povms = {}
    for party, dim, outcomes in (("bob", db, 1 << (n - k)), ("charlie", dc, 1 << k)):
        table = _field(data, party, "")
        stacks = []
        for i in range(N):
            ptr = f"/{party}/{i}"
            elems = _field(table, str(i), f"/{party}")
            if not isinstance(elems, list):
                raise StrategyFormatError(ptr, "expected a list of matrices")
            mats = np.array([matrix_from_json(E, f"{ptr}/{j}") for j, E in enumerate(elems)])
            try:
                stacks.append(game.check_povm(mats, dim, outcomes, ptr))
            except game.StrategyError as exc:
                raise StrategyFormatError(ptr, str(exc)) from None
        povms[party] = tuple(stacks)
    return game.Strategy(n, k, channel, povms["bob"], povms["charlie"])


def dumps_strategy(s: game.Strategy) -> str:
    return json.dumps(strategy_to_dict(s))


def loads_strategy(text: str) -> game.Strategy:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StrategyFormatError("", f"invalid JSON ({exc})") from None
    return strategy_from_dict(data)
