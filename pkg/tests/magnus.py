"""Faithful model of the class-3 nilpotent product of C_p's, for p >= 5.

``x_i -> 1 + X_i`` in F_p<X_1..X_n> truncated above degree 3.  For p >= 5 the
kernel of this map on the free product of the C_p is exactly gamma_4, so two
normal forms denote the same group element iff their images agree.  The model
shares no code with the collector it checks.
"""

from __future__ import annotations

import numpy as np


class Magnus:
    def __init__(self, n: int, p: int, parts=None):
        self.n, self.p = n, p
        if parts is None:
            parts = (
                np.ones((), dtype=np.int64),
                np.zeros(n, dtype=np.int64),
                np.zeros((n, n), dtype=np.int64),
                np.zeros((n, n, n), dtype=np.int64),
            )
        self.parts = tuple(np.asarray(x, dtype=np.int64) % p for x in parts)

    @classmethod
    def gen(cls, n, p, s):
        g = cls(n, p)
        d1 = np.zeros(n, dtype=np.int64)
        d1[s - 1] = 1
        return cls(n, p, (g.parts[0], d1, g.parts[2], g.parts[3]))

    def __mul__(self, other):
        a0, a1, a2, a3 = self.parts
        b0, b1, b2, b3 = other.parts
        c0 = a0 * b0
        c1 = a0 * b1 + a1 * b0
        c2 = a0 * b2 + np.multiply.outer(a1, b1) + a2 * b0
        c3 = (
            a0 * b3
            + np.multiply.outer(a1, b2)
            + np.multiply.outer(a2, b1)
            + a3 * b0
        )
        return Magnus(self.n, self.p, (c0, c1, c2, c3))

    def inv(self):
        # self = c0 (1 + N) with c0 a unit scalar
        c0 = int(self.parts[0])
        s = pow(c0, -1, self.p)
        N = Magnus(self.n, self.p, (0, *(x * s for x in self.parts[1:])))
        one = Magnus(self.n, self.p)
        N2 = N * N
        N3 = N2 * N
        neg = lambda m, k: Magnus(self.n, self.p, tuple(k * x for x in m.parts))
        out = one
        for term, sign in ((N, -1), (N2, 1), (N3, -1)):
            out = Magnus(self.n, self.p, tuple(x + y for x, y in zip(out.parts, neg(term, sign).parts)))
        return Magnus(self.n, self.p, tuple(x * s for x in out.parts))

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        out = Magnus(self.n, self.p)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return all(np.array_equal(x, y) for x, y in zip(self.parts, other.parts))

    def key(self):
        return b"".join(x.tobytes() for x in self.parts)


def comm(x, y):
    return x.inv() * y.inv() * x * y


def evaluate(nf) -> Magnus:
    """Image of a normal form ``x^a prod [x_j,x_i]^b prod [x_j,x_i,x_k]^c``."""
    from capacheck.phi import pair_list, triple_list

    n, p = nf.n, nf.p
    g = [Magnus.gen(n, p, s) for s in range(1, n + 1)]
    out = Magnus(n, p)
    for s, e in enumerate(nf.a):
        out = out * g[s] ** e
    for (j, i), e in zip(pair_list(n), nf.b):
        out = out * comm(g[j - 1], g[i - 1]) ** e
    for (j, i, k), e in zip(triple_list(n), nf.c):
        out = out * comm(comm(g[j - 1], g[i - 1]), g[k - 1]) ** e
    return out
