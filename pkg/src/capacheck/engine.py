"""Capability of class-two, exponent-p groups decided by linear algebra.

A group ``G`` minimally generated by ``n`` elements is encoded by the subspace
``X`` of ``V`` spanned by its commutator relations.  With ``phi_1..phi_n`` from
:mod:`capacheck.phi`,

    Y_X = phi_1(X) + ... + phi_n(X)                 (inside W)
    Z_X = phi_1^{-1}(Y_X) ∩ ... ∩ phi_n^{-1}(Y_X)   (inside V)

and ``G`` is capable exactly when ``Z_X == X``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb

import numpy as np

from . import linalg
from .linalg import DTYPE, DimensionMismatchError, Subspace
from .phi import PhiStructure, build

__all__ = [
    "CapabilityReport",
    "ReducedInstance",
    "DecompositionError",
    "compute_Y",
    "compute_Z",
    "is_capable",
    "central_coefficient_space",
    "reduce_special",
    "hn_bound",
    "hn_bound_check",
    "has_missing_index",
    "witnesses",
]


class DecompositionError(RuntimeError):
    """The transported subspace failed to split off the central generators."""


def _check_X(ps: PhiStructure, X: Subspace) -> None:
    if X.p != ps.p or X.ambient_dim != ps.dimV:
        raise DimensionMismatchError(
            f"X lives in F_{X.p}^{X.ambient_dim}, expected F_{ps.p}^{ps.dimV} for n={ps.n}"
        )


def compute_Y(ps: PhiStructure, X: Subspace) -> Subspace:
    _check_X(ps, X)
    if X.dim == 0:
        return Subspace.zero(ps.p, ps.dimW)
    # images[r] has the phi_r images of the X basis as columns
    images = ps.phi @ X.basis.T
    gens = images.transpose(0, 2, 1).reshape(-1, ps.dimW)
    return Subspace.span(gens, ps.p, ps.dimW)


def compute_Z(ps: PhiStructure, X: Subspace, Y: Subspace | None = None) -> Subspace:
    """Joint preimage of ``Y_X`` under every ``phi_r``.

    Each preimage is ``kernel(Q @ phi_r)`` for the quotient map ``Q`` onto
    ``W / Y_X``; the intersection of those kernels is the kernel of the
    stacked matrices.
    """
    _check_X(ps, X)
    if Y is None:
        Y = compute_Y(ps, X)
    q = linalg.complement_projection(Y)
    if q.shape[0] == 0:
        return Subspace.full(ps.p, ps.dimV)
    stacked = (q @ ps.phi % ps.p).reshape(-1, ps.dimV)
    return linalg.kernel(stacked, ps.p, cols=ps.dimV)


def witnesses(X: Subspace, Z: Subspace) -> list[tuple[int, ...]]:
    """Basis of ``Z`` reduced modulo ``X``, in RREF (sorted by pivot column)."""
    reduced = [linalg.reduce_vector(X, row) for row in Z.basis]
    reduced = [w for w in reduced if w.any()]
    if not reduced:
        return []
    return Subspace.span(reduced, X.p, X.ambient_dim).vectors()


@lru_cache(maxsize=64)
def _psi_matrices_cached(n: int, p: int) -> np.ndarray:
    psi = _psi_matrices(build(n, p))
    psi.setflags(write=False)
    return psi


def _psi_matrices(ps: PhiStructure) -> np.ndarray:
    """``psi[r-1]`` (dimV x n) sends a coefficient vector ``a`` to the V-image
    of ``[prod x_i^{a_i}, x_r]``."""
    n = ps.n
    psi = np.zeros((n, ps.dimV, n), dtype=DTYPE)
    for r in range(1, n + 1):
        for i in range(1, n + 1):
            if r < i:
                psi[r - 1, ps.pair_to_col(i, r), i - 1] = 1
            elif i < r:
                psi[r - 1, ps.pair_to_col(r, i), i - 1] = ps.p - 1
    return psi


def central_coefficient_space(ps: PhiStructure, X: Subspace) -> Subspace:
    """Coefficient vectors ``a`` in F_p^n whose generator product is central in G.

    Its dimension is ``dim Z(G)/[G,G]``.
    """
    _check_X(ps, X)
    q = linalg.complement_projection(X)
    if q.shape[0] == 0:
        return Subspace.full(ps.p, ps.n)
    stacked = (q @ _psi_matrices_cached(ps.n, ps.p) % ps.p).reshape(-1, ps.n)
    return linalg.kernel(stacked, ps.p, cols=ps.n)


def hn_bound(m: int) -> int:
    """Smallest integer ``k >= 0`` with ``k**2 + 3*k >= 2*m``.

    Equals ``ceil((-3 + sqrt(9 + 8m)) / 2)`` without floating point.
    """
    k = 0
    while k * k + 3 * k < 2 * m:
        k += 1
    return k


def has_missing_index(ps: PhiStructure, X: Subspace) -> bool:
    """Some generator index occurs in no nonzero coordinate of any vector of X."""
    support = np.flatnonzero(X.basis.any(axis=0))
    used = set()
    for c in support:
        used.update(ps.pairs[c])
    return len(used) < ps.n


@dataclass(frozen=True)
class ReducedInstance:
    """``G = K ⊕ C_p^r`` with ``K`` encoded by ``X_reduced`` over ``V_m``."""

    m: int
    r: int
    X_reduced: Subspace
    # columns are the new generators written in the old ones; central ones last
    change_of_basis: np.ndarray = field(repr=False)

    @cached_property
    def capable(self) -> bool:
        if self.m < 2:
            # abelian of rank m + r = n >= 2: noncyclic, hence capable
            return True
        return is_capable(build(self.m, self.X_reduced.p), self.X_reduced).capable


@dataclass(frozen=True)
class CapabilityReport:
    n: int
    p: int
    X: Subspace
    Y: Subspace
    Z: Subspace
    capable: bool
    witnesses: list
    central_dim: int
    hn_ok: bool
    sufficient_hit: bool
    general_sufficient: bool
    coordinate: bool
    missing_index: bool

    @property
    def dimX(self) -> int:
        return self.X.dim

    @property
    def dimY(self) -> int:
        return self.Y.dim

    @property
    def dimZ(self) -> int:
        return self.Z.dim

    @property
    def commutator_dim(self) -> int:
        return self.X.ambient_dim - self.X.dim

    def to_json(self) -> dict:
        m = self.n - self.central_dim
        return {
            "n": self.n,
            "p": self.p,
            "capable": self.capable,
            "dimV": self.X.ambient_dim,
            "dimW": self.Y.ambient_dim,
            "dimX": self.dimX,
            "dimY": self.dimY,
            "dimZ": self.dimZ,
            "X": self.X.vectors(),
            "Y": self.Y.vectors(),
            "Z": self.Z.vectors(),
            "witnesses": [list(w) for w in self.witnesses],
            "central_dim": self.central_dim,
            "bounds": {
                "commutator_dim": self.commutator_dim,
                "central_quotient_dim": m,
                "hn_required_commutator_dim": hn_bound(m),
                "hn_ok": self.hn_ok,
                "general_sufficient": self.general_sufficient,
            },
            "fast_paths": {
                "dim_le_2": self.sufficient_hit,
                "coordinate": self.coordinate,
                "missing_index": self.missing_index,
            },
        }


def is_capable(ps: PhiStructure, X: Subspace) -> CapabilityReport:
    _check_X(ps, X)
    Y = compute_Y(ps, X)
    Z = compute_Z(ps, X, Y)
    wit = witnesses(X, Z)
    capable = Z.dim == X.dim
    if capable != (not wit):
        raise AssertionError("witness extraction disagrees with dimension test")
    r = central_coefficient_space(ps, X).dim
    m = ps.n - r
    k = ps.dimV - X.dim
    return CapabilityReport(
        n=ps.n,
        p=ps.p,
        X=X,
        Y=Y,
        Z=Z,
        capable=capable,
        witnesses=wit,
        central_dim=r,
        hn_ok=k >= hn_bound(m),
        sufficient_hit=X.dim <= 2,
        general_sufficient=k >= comb(m, 2) - 2,
        coordinate=X.is_coordinate(),
        missing_index=has_missing_index(ps, X),
    )


def hn_bound_check(ps: PhiStructure, X: Subspace) -> bool:
    """Necessary condition for capability: ``dim[G,G] >= hn_bound(dim G/Z(G))``."""
    r = central_coefficient_space(ps, X).dim
    return ps.dimV - X.dim >= hn_bound(ps.n - r)


def alternating_square(P: np.ndarray, ps: PhiStructure) -> np.ndarray:
    """Matrix on V induced by the generator change ``P`` (columns = new generators).

    ``v_ji -> sum over a > b of (P[a,j] P[b,i] - P[a,i] P[b,j]) v_ab``.
    """
    hi = np.array([j - 1 for j, _ in ps.pairs])
    lo = np.array([i - 1 for _, i in ps.pairs])
    P = np.asarray(P, dtype=DTYPE)
    L = P[np.ix_(hi, hi)] * P[np.ix_(lo, lo)] - P[np.ix_(hi, lo)] * P[np.ix_(lo, hi)]
    return L % ps.p


def _complete_basis(central: Subspace) -> np.ndarray:
    """New generators as columns: standard vectors on the non-pivot columns of
    ``central``, followed by the RREF basis of ``central``."""
    n = central.ambient_dim
    piv = set(central.pivots)
    gens = [np.eye(n, dtype=DTYPE)[t] for t in range(n) if t not in piv]
    gens.extend(central.basis)
    return np.array(gens, dtype=DTYPE).T.reshape(n, n)


def reduce_special(ps: PhiStructure, X: Subspace) -> ReducedInstance:
    """Split off the central cyclic factors: ``G = K ⊕ C_p^r`` with ``Z(K) = [K,K]``.

    The returned instance's ``capable`` is the verdict for ``K`` (computed on
    first access), which equals the verdict for ``G``.
    """
    _check_X(ps, X)
    central = central_coefficient_space(ps, X)
    r = central.dim
    m = ps.n - r
    if r == 0:
        return ReducedInstance(m=m, r=0, X_reduced=X, change_of_basis=np.eye(ps.n, dtype=DTYPE))
    P = _complete_basis(central)
    L = alternating_square(P, ps)
    X_new = linalg.preimage(L, X)
    if X_new.dim != X.dim:
        raise DecompositionError("generator change is not invertible")

    keep = [c for c, (j, _) in enumerate(ps.pairs) if j <= m]
    for c, (j, i) in enumerate(ps.pairs):
        if j > m and not linalg.membership(X_new, ps.v(j, i)):
            raise DecompositionError(f"transported X misses v{j}{i} of a central generator")
    if m >= 2:
        X_red = Subspace.span(X_new.basis[:, keep], ps.p, comb(m, 2))
        if X_red.dim + (ps.dimV - len(keep)) != X.dim:
            raise DecompositionError("transported X does not split as X'' + central part")
    else:
        X_red = Subspace.zero(ps.p, 0)
    return ReducedInstance(m=m, r=r, X_reduced=X_red, change_of_basis=P)
