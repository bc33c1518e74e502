"""Exact arithmetic in the class-3 nilpotent product of n cyclic groups of order p.

Every element of ``K = <x_1> * ... * <x_n> / gamma_4`` has a unique normal form

    x_1^a_1 ... x_n^a_n  *  prod [x_j, x_i]^b_ji  *  prod [x_j, x_i, x_k]^c_jik

with all exponents mod p (i < j for the weight-two part, i < j and i <= k for
the weight-three part).  ``K_2`` is abelian and ``K_3`` is central, so only the
generator part needs collecting.  Products are formed by right-multiplying one
generator power at a time and recording the commutators produced when it is
moved left past higher-index generators, using

    [xy, z]       = [x, z] [x, z, y] [y, z]
    [x^r, y^s]    = [x, y]^rs [x, y, x]^(s C(r,2)) [x, y, y]^(r C(s,2))
    [x_j, x_i, x_r] = [x_j, x_r, x_i] [x_i, x_r, x_j]^-1     (r < i < j)

This module is deliberately independent of :mod:`capacheck.phi`; the two are
compared by :func:`phi_crosscheck`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .linalg import Subspace, check_prime
from .phi import PhiStructure, pair_list, triple_list

__all__ = [
    "NormalForm",
    "identity",
    "generator",
    "basic_commutator",
    "from_K2",
    "multiply",
    "inverse",
    "commutator",
    "power",
    "from_word",
    "phi_crosscheck",
    "group_level_YX",
    "selftest",
]


class ParameterMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class NormalForm:
    n: int
    p: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        return multiply(self, other)

    def __pow__(self, e: int) -> "NormalForm":
        return power(self, e)

    def is_identity(self) -> bool:
        return not (any(self.a) or any(self.b) or any(self.c))

    def in_K2(self) -> bool:
        return not any(self.a)

    def in_K3(self) -> bool:
        return not (any(self.a) or any(self.b))

    def __repr__(self) -> str:
        t = _tables(self.n, self.p)
        parts = [f"x{s + 1}^{e}" for s, e in enumerate(self.a) if e]
        parts += [f"[x{j},x{i}]^{e}" for (j, i), e in zip(t.pairs, self.b) if e]
        parts += [f"[x{j},x{i},x{k}]^{e}" for (j, i, k), e in zip(t.triples, self.c) if e]
        return f"NormalForm(n={self.n}, p={self.p}: {' '.join(parts) or 'e'})"


@dataclass(frozen=True)
class _Tables:
    pairs: tuple
    triples: tuple
    pidx: dict
    tidx: dict
    # rewrite[(j, i, r)] -> [(triple position, coefficient)] for [x_j, x_i, x_r]
    rewrite: dict


@lru_cache(maxsize=None)
def _tables(n: int, p: int) -> _Tables:
    pairs = tuple(pair_list(n))
    triples = tuple(triple_list(n))
    pidx = {t: k for k, t in enumerate(pairs)}
    tidx = {t: k for k, t in enumerate(triples)}
    rewrite = {}
    for j, i in pairs:
        for r in range(1, n + 1):
            if r >= i:
                rewrite[(j, i, r)] = [(tidx[(j, i, r)], 1)]
            else:
                # three-term Jacobi identity modulo gamma_4
                rewrite[(j, i, r)] = [(tidx[(j, r, i)], 1), (tidx[(i, r, j)], p - 1)]
    return _Tables(pairs, triples, pidx, tidx, rewrite)


def _check(n: int, p: int) -> None:
    check_prime(p)
    if n < 1:
        raise ValueError(f"need n >= 1 generators, got {n}")


def identity(n: int, p: int) -> NormalForm:
    _check(n, p)
    t = _tables(n, p)
    return NormalForm(n, p, (0,) * n, (0,) * len(t.pairs), (0,) * len(t.triples))


def generator(n: int, p: int, s: int, e: int = 1) -> NormalForm:
    """``x_s^e``."""
    one = identity(n, p)
    if not 1 <= s <= n:
        raise IndexError(f"generator x{s} outside 1..{n}")
    a = list(one.a)
    a[s - 1] = e % p
    return NormalForm(n, p, tuple(a), one.b, one.c)


def basic_commutator(n: int, p: int, j: int, i: int, k: int | None = None) -> NormalForm:
    """``[x_j, x_i]`` or, with ``k``, the normal-form basis element ``[x_j, x_i, x_k]``."""
    one = identity(n, p)
    t = _tables(n, p)
    if k is None:
        b = list(one.b)
        b[t.pidx[(j, i)]] = 1
        return NormalForm(n, p, one.a, tuple(b), one.c)
    c = list(one.c)
    c[t.tidx[(j, i, k)]] = 1
    return NormalForm(n, p, one.a, one.b, tuple(c))


def from_K2(n: int, p: int, b, c=None) -> NormalForm:
    """Element of ``K_2`` with weight-two exponents ``b`` (V-coordinates)."""
    one = identity(n, p)
    b = tuple(int(x) % p for x in b)
    c = one.c if c is None else tuple(int(x) % p for x in c)
    if len(b) != len(one.b) or len(c) != len(one.c):
        raise ValueError("coordinate vector has the wrong length")
    return NormalForm(n, p, one.a, b, c)


def _add_bracket(c: list, t: _Tables, b: list, s: int, e: int, p: int) -> None:
    """``c += [B, x_s^e]`` for the weight-two part ``B`` given by ``b``."""
    for pos, coeff in enumerate(b):
        if coeff:
            j, i = t.pairs[pos]
            for tpos, sign in t.rewrite[(j, i, s)]:
                c[tpos] = (c[tpos] + sign * coeff * e) % p


def _collect_generator(a: list, b: list, c: list, t: _Tables, s: int, e: int, p: int) -> None:
    """Replace ``x^a`` by the normal form of ``x^a * x_s^e``.

    Moving ``x_s^e`` left past ``T = x_{s+1}^{a_{s+1}} ... x_n^{a_n}`` leaves
    ``[T, x_s^e]`` behind, which is added to ``b`` and ``c``.
    """
    n = len(a)
    for tt in range(s + 1, n + 1):
        f = a[tt - 1]
        if not f:
            continue
        pos = t.pidx[(tt, s)]
        b[pos] = (b[pos] + f * e) % p
        # [x_t^f, x_s^e] = [x_t,x_s]^(fe) [x_t,x_s,x_t]^(e C(f,2)) [x_t,x_s,x_s]^(f C(e,2))
        k = t.tidx[(tt, s, tt)]
        c[k] = (c[k] + e * comb(f, 2)) % p
        k = t.tidx[(tt, s, s)]
        c[k] = (c[k] + f * comb(e, 2)) % p
        # [[x_t^f, x_s^e], x_{t+1}^{a_{t+1}} ... x_n^{a_n}]
        for u in range(tt + 1, n + 1):
            g = a[u - 1]
            if g:
                k = t.tidx[(tt, s, u)]
                c[k] = (c[k] + f * e * g) % p
    a[s - 1] = (a[s - 1] + e) % p


def _times_generator(a: list, b: list, c: list, t: _Tables, s: int, e: int, p: int) -> None:
    # x^a B C x_s^e = x^a x_s^e B [B, x_s^e] C
    _add_bracket(c, t, b, s, e, p)
    _collect_generator(a, b, c, t, s, e, p)


def _same_group(u: NormalForm, v: NormalForm) -> None:
    if (u.n, u.p) != (v.n, v.p):
        raise ParameterMismatchError(f"elements of different groups: {(u.n, u.p)} vs {(v.n, v.p)}")


def multiply(u: NormalForm, v: NormalForm) -> NormalForm:
    _same_group(u, v)
    p = u.p
    t = _tables(u.n, p)
    a, b, c = list(u.a), list(u.b), list(u.c)
    for s, e in enumerate(v.a, start=1):
        if e:
            _times_generator(a, b, c, t, s, e, p)
    b = [(x + y) % p for x, y in zip(b, v.b)]
    c = [(x + y) % p for x, y in zip(c, v.c)]
    return NormalForm(u.n, p, tuple(a), tuple(b), tuple(c))


def inverse(u: NormalForm) -> NormalForm:
    p = u.p
    t = _tables(u.n, p)
    # (x^a B C)^-1 = C^-1 B^-1 x_n^-a_n ... x_1^-a_1
    a = [0] * u.n
    b = [0] * len(u.b)
    c = [0] * len(u.c)
    for s in range(u.n, 0, -1):
        if u.a[s - 1]:
            _times_generator(a, b, c, t, s, (-u.a[s - 1]) % p, p)
    # left factor B' = B^-1 C^-1 passes the generators: B' x^a = x^a B' [B', x^a]
    nb = [(-x) % p for x in u.b]
    for s in range(1, u.n + 1):
        if a[s - 1]:
            _add_bracket(c, t, nb, s, a[s - 1], p)
    b = [(x + y) % p for x, y in zip(b, nb)]
    c = [(x - y) % p for x, y in zip(c, u.c)]
    return NormalForm(u.n, p, tuple(a), tuple(b), tuple(c))


def commutator(u: NormalForm, v: NormalForm, *rest: NormalForm) -> NormalForm:
    """Left-normed ``[u, v, ...]`` with ``[x, y] = x^-1 y^-1 x y``."""
    _same_group(u, v)
    out = multiply(multiply(inverse(u), inverse(v)), multiply(u, v))
    for w in rest:
        out = commutator(out, w)
    return out


def power(u: NormalForm, e: int) -> NormalForm:
    if e < 0:
        return power(inverse(u), -e)
    result = identity(u.n, u.p)
    base = u
    while e:
        if e & 1:
            result = multiply(result, base)
        e >>= 1
        if e:
            base = multiply(base, base)
    return result


def from_word(n: int, p: int, word) -> NormalForm:
    """Collect a word given as ``(generator index, exponent)`` letters."""
    g = identity(n, p)
    t = _tables(n, p)
    a, b, c = list(g.a), list(g.b), list(g.c)
    for s, e in word:
        if not 1 <= s <= n:
            raise IndexError(f"generator x{s} outside 1..{n}")
        if e % p:
            _times_generator(a, b, c, t, s, e % p, p)
    return NormalForm(n, p, tuple(a), tuple(b), tuple(c))


def random_element(n: int, p: int, rng: random.Random) -> NormalForm:
    one = identity(n, p)
    return NormalForm(
        n,
        p,
        tuple(rng.randrange(p) for _ in one.a),
        tuple(rng.randrange(p) for _ in one.b),
        tuple(rng.randrange(p) for _ in one.c),
    )


def phi_crosscheck(ps: PhiStructure) -> bool:
    """Every column ``phi_r(v_ji)`` equals the c-part of ``[[x_j, x_i], x_r]``."""
    n, p = ps.n, ps.p
    for (j, i) in ps.pairs:
        col = ps.pair_to_col(j, i)
        k = basic_commutator(n, p, j, i)
        for r in range(1, n + 1):
            g = commutator(k, generator(n, p, r))
            if not g.in_K3():
                return False
            if not np.array_equal(np.array(g.c), ps.phi_r(r)[:, col]):
                return False
    return True


def group_level_YX(ps: PhiStructure, X: Subspace) -> Subspace:
    """Span of the c-parts of ``[k, x_r]`` for ``k`` running over a basis of X."""
    n, p = ps.n, ps.p
    rows = []
    for vec in X.basis:
        k = from_K2(n, p, vec)
        for r in range(1, n + 1):
            g = commutator(k, generator(n, p, r))
            if not g.in_K3():
                raise AssertionError("commutator of K_2 with a generator left K_3")
            rows.append(g.c)
    if not rows:
        return Subspace.zero(p, ps.dimW)
    return Subspace.span(rows, p, ps.dimW)


def _c2(r: int) -> int:
    # C(r, 2) as a polynomial in r, valid for negative exponents too
    return r * (r - 1) // 2


def _identities_hold(x, y, z, r: int, s: int) -> dict[str, bool]:
    C = commutator
    e = identity(x.n, x.p)
    xr, ys, yr, xs = power(x, r), power(y, s), power(y, r), power(x, s)
    return {
        "a": C(x * y, z) == C(x, z) * C(x, z, y) * C(y, z),
        "b": C(x, y * z) == C(x, z) * C(z, C(y, x)) * C(x, y),
        "c": C(x, y, z) * C(y, z, x) * C(z, x, y) == e,
        "d": C(xr, ys)
        == power(C(x, y), r * s) * power(C(x, y, x), s * _c2(r)) * power(C(x, y, y), r * _c2(s)),
        "e": C(yr, xs)
        == power(C(x, y), -r * s)
        * power(C(x, y, x), -r * _c2(s))
        * power(C(x, y, y), -s * _c2(r)),
    }


def commutator_identities(x, y, z, r: int, s: int) -> dict[str, bool]:
    """Evaluate the five standard class-3 commutator identities on one instance."""
    return _identities_hold(x, y, z, r, s)


def selftest(
    ns=(2, 3, 4, 5), primes=(3, 5), identity_trials: int = 1000, assoc_trials: int = 500, seed: int = 0
) -> list[tuple[str, bool, str]]:
    """Run the oracle's internal checks; returns ``(name, passed, detail)`` rows."""
    from . import engine, phi

    rng = random.Random(seed)
    rows = []
    for p in primes:
        for n in ns:
            ok = phi_crosscheck(phi.build(n, p))
            rows.append((f"phi_crosscheck n={n} p={p}", ok, ""))

    bad = 0
    for trial in range(assoc_trials):
        n, p = rng.choice([(2, 3), (3, 3), (3, 5), (4, 3), (4, 5)])
        u, v, w = (random_element(n, p, rng) for _ in range(3))
        if multiply(multiply(u, v), w) != multiply(u, multiply(v, w)):
            bad += 1
    rows.append(("associativity", bad == 0, f"{assoc_trials} triples, {bad} failures"))

    bad = 0
    for trial in range(identity_trials):
        n, p = rng.choice([(2, 3), (3, 3), (3, 5), (4, 5), (3, 7)])
        x, y, z = (random_element(n, p, rng) for _ in range(3))
        r, s = rng.randrange(-2 * p, 2 * p), rng.randrange(-2 * p, 2 * p)
        if not all(_identities_hold(x, y, z, r, s).values()):
            bad += 1
    rows.append(("commutator identities (a)-(e)", bad == 0, f"{identity_trials} instances, {bad} failures"))

    bad = 0
    for n in (3, 4):
        for p in (3, 5):
            ps = phi.build(n, p)
            for _ in range(100):
                X = random_subspace(ps.dimV, p, rng)
                if group_level_YX(ps, X) != engine.compute_Y(ps, X):
                    bad += 1
    rows.append(("group-level Y_X == compute_Y", bad == 0, f"400 subspaces, {bad} failures"))
    return rows


def random_subspace(d: int, p: int, rng: random.Random, k: int | None = None) -> Subspace:
    """Random subspace from ``k`` (default: random count) random generators."""
    if k is None:
        k = rng.randrange(d + 1)
    rows = [[rng.randrange(p) for _ in range(d)] for _ in range(k)]
    return Subspace.span(rows, p, d) if rows else Subspace.zero(p, d)
