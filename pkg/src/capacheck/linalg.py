"""Exact linear algebra over the prime field F_p.

Matrices are plain ``numpy`` integer arrays holding residues in ``[0, p)``;
the modulus travels alongside as an explicit argument.  Subspaces are held
canonically by their reduced row-echelon basis, so two :class:`Subspace`
values describe the same set exactly when they compare equal.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldError",
    "EvenPrimeError",
    "DimensionMismatchError",
    "Subspace",
    "check_prime",
    "as_matrix",
    "rref",
    "rank",
    "kernel",
    "complement_projection",
    "subspace_sum",
    "subspace_intersection",
    "preimage",
    "image",
    "membership",
    "reduce_vector",
]

MAX_PRIME = 1 << 16
DTYPE = np.int64


class FieldError(ValueError):
    """The modulus is not an admissible prime."""


class EvenPrimeError(FieldError):
    """p = 2 was requested; only odd primes are supported."""


class DimensionMismatchError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Validate ``p`` as an odd prime below 2**16 and return it as ``int``."""
    if isinstance(p, bool) or int(p) != p:
        raise FieldError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p == 2:
        raise EvenPrimeError("p = 2 is not supported: p must be an odd prime")
    if not _is_prime(p):
        raise FieldError(f"p = {p} is not a prime (p must be an odd prime)")
    if p >= MAX_PRIME:
        raise FieldError(f"p = {p} is too large (limit {MAX_PRIME})")
    return p


def as_matrix(rows, p: int, cols: int | None = None) -> np.ndarray:
    """Coerce ``rows`` to a 2-D array of residues mod ``p``.

    ``cols`` fixes the width when ``rows`` is empty.
    """
    a = np.asarray(rows, dtype=DTYPE)
    if a.size == 0:
        width = cols if cols is not None else (a.shape[1] if a.ndim == 2 else 0)
        return np.zeros((0, width), dtype=DTYPE)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-D matrix, got shape {a.shape}")
    if cols is not None and a.shape[1] != cols:
        raise DimensionMismatchError(f"expected {cols} columns, got {a.shape[1]}")
    return a % p


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _rref_inplace(a: np.ndarray, p: int) -> list[int]:
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = a[r:, c].nonzero()[0]
        if not len(nz):
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = a[r] * pow(lead, -1, p) % p
        f = a[:, c].copy()
        f[r] = 0
        if f.any():
            a -= f[:, None] * a[r]
            a %= p
        pivots.append(c)
        r += 1
    return pivots


def rref(m, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of ``m`` over F_p.

    Returns ``(R, rank, pivots)`` where ``R`` has the shape of ``m`` with the
    zero rows at the bottom.
    """
    a = as_matrix(m, p)
    pivots = _rref_inplace(a, p)
    return a, len(pivots), pivots


def rank(m, p: int) -> int:
    return rref(m, p)[1]


class Subspace:
    """A subspace of F_p^d stored as its RREF basis.

    Build instances with :meth:`span` (any generating set) or the
    ``zero``/``full`` constructors; the raw constructor trusts its input.
    """

    __slots__ = ("p", "ambient_dim", "basis", "pivots", "_key")

    def __init__(self, p: int, ambient_dim: int, basis: np.ndarray, pivots: Sequence[int]):
        self.p = p
        self.ambient_dim = ambient_dim
        self.basis = _frozen(basis)
        self.pivots = tuple(pivots)
        self._key = None

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> "Subspace":
        m = as_matrix(vectors, p, cols=ambient_dim)
        pivots = _rref_inplace(m, p)
        return cls(p, ambient_dim, m[: len(pivots)].copy(), pivots)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.zeros((0, ambient_dim), dtype=DTYPE), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=DTYPE), range(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self) -> int:
        return self.dim

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.p, self.ambient_dim, self.basis.shape, self.basis.tobytes())
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __contains__(self, v) -> bool:
        return membership(self, v)

    def __le__(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return all(membership(other, row) for row in self.basis)

    def is_coordinate(self) -> bool:
        """True when the subspace is spanned by standard basis vectors."""
        return bool(np.all(np.count_nonzero(self.basis, axis=1) == 1))

    def vectors(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.basis]

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, ambient_dim={self.ambient_dim}, basis={self.vectors()})"


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.p != b.p:
        raise DimensionMismatchError(f"moduli differ: {a.p} vs {b.p}")
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def _kernel_from_rref(r: np.ndarray, pivots: Sequence[int], ncols: int, p: int) -> Subspace:
    piv = set(pivots)
    free = [c for c in range(ncols) if c not in piv]
    if not free:
        return Subspace.zero(p, ncols)
    basis = np.zeros((len(free), ncols), dtype=DTYPE)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for row, pc in enumerate(pivots):
            basis[t, pc] = (-r[row, f]) % p
    return Subspace.span(basis, p, ncols)


def kernel(m, p: int, cols: int | None = None) -> Subspace:
    """Right null space ``{v : m @ v == 0}``."""
    a = as_matrix(m, p, cols=cols)
    pivots = _rref_inplace(a, p)
    return _kernel_from_rref(a, pivots, a.shape[1], p)


def complement_projection(s: Subspace) -> np.ndarray:
    """Matrix ``Q`` with ``kernel(Q) == s``.

    Row ``f`` (one per non-pivot column) reads off coordinate ``f`` of a vector
    reduced modulo ``s``; equivalently the rows span the annihilator of ``s``.
    """
    d, p = s.ambient_dim, s.p
    piv = set(s.pivots)
    free = [c for c in range(d) if c not in piv]
    q = np.zeros((len(free), d), dtype=DTYPE)
    for t, f in enumerate(free):
        q[t, f] = 1
        for row, pc in enumerate(s.pivots):
            q[t, pc] = (-s.basis[row, f]) % p
    return q


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return Subspace.span(np.vstack([a.basis, b.basis]), a.p, a.ambient_dim)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Intersection as the kernel of the stacked annihilators of ``a`` and ``b``."""
    _same_ambient(a, b)
    stacked = np.vstack([complement_projection(a), complement_projection(b)])
    return kernel(stacked, a.p, cols=a.ambient_dim)


def preimage(m, target: Subspace) -> Subspace:
    """``{v : m @ v in target}`` computed as ``kernel(Q @ m)``."""
    p = target.p
    a = as_matrix(m, p)
    if a.shape[0] != target.ambient_dim:
        raise DimensionMismatchError(
            f"map has {a.shape[0]} rows but target lives in dimension {target.ambient_dim}"
        )
    q = complement_projection(target)
    return kernel(q @ a % p, p, cols=a.shape[1])


def image(m, s: Subspace) -> Subspace:
    """``m(s)`` as a canonical subspace of the codomain."""
    a = as_matrix(m, s.p)
    if a.shape[1] != s.ambient_dim:
        raise DimensionMismatchError(
            f"map has {a.shape[1]} columns but subspace lives in dimension {s.ambient_dim}"
        )
    return Subspace.span(s.basis @ a.T % s.p, s.p, a.shape[0])


def reduce_vector(s: Subspace, v) -> np.ndarray:
    """Reduce ``v`` modulo ``s``: the result is zero on every pivot column of ``s``."""
    w = np.asarray(v, dtype=DTYPE) % s.p
    if w.shape != (s.ambient_dim,):
        raise DimensionMismatchError(
            f"vector of length {w.shape} does not live in dimension {s.ambient_dim}"
        )
    w = w.copy()
    for row, pc in enumerate(s.pivots):
        c = w[pc]
        if c:
            w = (w - c * s.basis[row]) % s.p
    return w


def membership(s: Subspace, v) -> bool:
    return not reduce_vector(s, v).any()


def span_all(subspaces: Iterable[Subspace]) -> Subspace:
    subspaces = list(subspaces)
    first = subspaces[0]
    for s in subspaces[1:]:
        _same_ambient(first, s)
    return Subspace.span(np.vstack([s.basis for s in subspaces]), first.p, first.ambient_dim)
