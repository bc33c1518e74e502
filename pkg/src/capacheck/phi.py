"""Coordinate spaces V, W and the commutation maps phi_r : V -> W.

V has basis ``v_ji`` (1 <= i < j <= n), one vector per basic commutator
``[x_j, x_i]``.  W has basis ``w_jik`` (i < j, i <= k <= n), one per basic
commutator ``[x_j, x_i, x_k]`` of weight three.  ``phi_r`` records what
commutation with ``x_r`` does to a weight-two commutator::

    phi_r(v_ji) = w_jir               if r >= i
                  w_jri - w_irj       if r <  i

Pairs are ordered lexicographically by ``(i, j)`` and triples by
``(i, j, k)``; every index in this module is 1-based on the group side and
0-based on the array side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .linalg import DTYPE, Subspace, check_prime

__all__ = ["PhiStructure", "build", "pair_list", "triple_list"]


class ParameterError(ValueError):
    pass


def pair_list(n: int) -> list[tuple[int, int]]:
    """Pairs ``(j, i)`` with ``i < j``, sorted by ``(i, j)``."""
    return [(j, i) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def triple_list(n: int) -> list[tuple[int, int, int]]:
    """Triples ``(j, i, k)`` with ``i < j`` and ``i <= k``, sorted by ``(i, j, k)``."""
    return [
        (j, i, k)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        for k in range(i, n + 1)
    ]


@dataclass(frozen=True, eq=False)
class PhiStructure:
    n: int
    p: int
    pairs: tuple[tuple[int, int], ...]
    triples: tuple[tuple[int, int, int], ...]
    pair_index: dict = field(repr=False)
    triple_index: dict = field(repr=False)
    # phi[r - 1] is the dimW x dimV matrix of phi_r
    phi: np.ndarray = field(repr=False)

    @property
    def dimV(self) -> int:
        return len(self.pairs)

    @property
    def dimW(self) -> int:
        return len(self.triples)

    def phi_r(self, r: int) -> np.ndarray:
        if not 1 <= r <= self.n:
            raise IndexError(f"generator index r={r} outside 1..{self.n}")
        return self.phi[r - 1]

    def pair_to_col(self, j: int, i: int) -> int:
        try:
            return self.pair_index[(j, i)]
        except KeyError:
            raise IndexError(f"({j},{i}) is not a pair with 1 <= i < j <= {self.n}") from None

    def col_to_pair(self, c: int) -> tuple[int, int]:
        if not 0 <= c < self.dimV:
            raise IndexError(f"column {c} outside 0..{self.dimV - 1}")
        return self.pairs[c]

    def triple_to_col(self, j: int, i: int, k: int) -> int:
        try:
            return self.triple_index[(j, i, k)]
        except KeyError:
            raise IndexError(
                f"({j},{i},{k}) is not a triple with i < j <= {self.n}, i <= k <= {self.n}"
            ) from None

    def col_to_triple(self, c: int) -> tuple[int, int, int]:
        if not 0 <= c < self.dimW:
            raise IndexError(f"column {c} outside 0..{self.dimW - 1}")
        return self.triples[c]

    def v(self, j: int, i: int) -> np.ndarray:
        """Standard basis vector ``v_ji`` of V."""
        e = np.zeros(self.dimV, dtype=DTYPE)
        e[self.pair_to_col(j, i)] = 1
        return e

    def w(self, j: int, i: int, k: int) -> np.ndarray:
        """Standard basis vector ``w_jik`` of W."""
        e = np.zeros(self.dimW, dtype=DTYPE)
        e[self.triple_to_col(j, i, k)] = 1
        return e

    def vector(self, coords: dict) -> np.ndarray:
        """Vector of V from ``{(j, i): coefficient}``."""
        out = np.zeros(self.dimV, dtype=DTYPE)
        for (j, i), c in coords.items():
            out[self.pair_to_col(j, i)] += c
        return out % self.p

    def zero_V(self) -> Subspace:
        return Subspace.zero(self.p, self.dimV)

    def full_V(self) -> Subspace:
        return Subspace.full(self.p, self.dimV)

    def span_V(self, vectors) -> Subspace:
        return Subspace.span(vectors, self.p, self.dimV)

    def format_v(self, vec) -> str:
        """Render a V-vector in ``v_ji`` notation, e.g. ``v41 - v31``."""
        terms = []
        for c, x in enumerate(np.asarray(vec) % self.p):
            x = int(x)
            if not x:
                continue
            j, i = self.pairs[c]
            name = f"v{j}{i}" if self.n < 10 else f"v({j},{i})"
            if x == 1:
                terms.append(("+", name))
            elif x == self.p - 1:
                terms.append(("-", name))
            else:
                terms.append(("+", f"{x}*{name}"))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {t}" for s, t in terms[1:])

    def to_json(self) -> dict:
        """Sparse dump: per ``phi_r``, per V-column, the nonzero ``[row, value]`` pairs."""
        maps = []
        for r in range(1, self.n + 1):
            m = self.phi[r - 1]
            cols = []
            for c in range(self.dimV):
                rows = np.flatnonzero(m[:, c])
                cols.append([[int(t), int(m[t, c])] for t in rows])
            maps.append({"r": r, "columns": cols})
        return {
            "n": self.n,
            "p": self.p,
            "dimV": self.dimV,
            "dimW": self.dimW,
            "pair_order": [list(t) for t in self.pairs],
            "triple_order": [list(t) for t in self.triples],
            "phi": maps,
        }


@lru_cache(maxsize=64)
def build(n: int, p: int) -> PhiStructure:
    """Materialize V, W and the matrices of phi_1..phi_n for ``(n, p)``."""
    p = check_prime(p)
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise ParameterError(f"need n >= 2 generators, got {n!r}")
    n = int(n)
    pairs = pair_list(n)
    triples = triple_list(n)
    pidx = {t: c for c, t in enumerate(pairs)}
    tidx = {t: c for c, t in enumerate(triples)}
    assert len(pairs) == comb(n, 2)
    assert len(triples) == 2 * (comb(n, 2) + comb(n, 3))

    phi = np.zeros((n, len(triples), len(pairs)), dtype=DTYPE)
    for r in range(1, n + 1):
        for c, (j, i) in enumerate(pairs):
            if r >= i:
                phi[r - 1, tidx[(j, i, r)], c] = 1
            else:
                phi[r - 1, tidx[(j, r, i)], c] = 1
                phi[r - 1, tidx[(i, r, j)], c] = p - 1
    phi.setflags(write=False)
    return PhiStructure(n, p, tuple(pairs), tuple(triples), pidx, tidx, phi)
