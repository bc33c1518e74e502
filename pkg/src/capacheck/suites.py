"""Named property suites: theorem consequences checked on concrete (n, p).

Each suite returns a :class:`SuiteResult`; ``failures`` holds the offending
subspaces (as lists of basis vectors) so a violation can be reproduced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import engine, oracle
from .enumeration import sample_subspaces
from .linalg import Subspace
from .phi import build
from .presentations import coordinate_subspace, coproduct, extend_with_central

__all__ = ["SUITES", "SuiteResult", "run_suite"]


@dataclass
class SuiteResult:
    name: str
    n: int
    p: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, X: Subspace | None = None, note: str = "") -> None:
        self.checked += 1
        if not ok:
            self.failures.append({"note": note, "X": X.vectors() if X is not None else None})

    def to_json(self) -> dict:
        return {
            "schema": "capacheck/1",
            "kind": "verify",
            "suite": self.name,
            "n": self.n,
            "p": self.p,
            "checked": self.checked,
            "passed": self.passed,
            "failures": [{"note": f["note"], "X": [list(v) for v in f["X"]] if f["X"] else None} for f in self.failures],
        }


def _random_spaces(d: int, p: int, count: int, rng: np.random.Generator, dims=None) -> list[Subspace]:
    dims = list(range(d + 1)) if dims is None else list(dims)
    out = []
    for k in rng.choice(dims, size=count):
        out.extend(sample_subspaces(d, p, int(k), 1, rng))
    return out


def coordsub(n: int, p: int, trials: int = 0, seed: int = 0) -> SuiteResult:
    """Every coordinate subspace satisfies Z_X = X (all 2^C(n,2) of them)."""
    res = SuiteResult("coordsub", n, p)
    ps = build(n, p)
    for size in range(ps.dimV + 1):
        for S in itertools.combinations(ps.pairs, size):
            X = coordinate_subspace(n, p, S)
            res.record(engine.compute_Z(ps, X) == X, X, f"S={list(S)}")
    return res


def addcyclic(n: int, p: int, trials: int = 200, seed: int = 0) -> SuiteResult:
    """Adding a central cyclic factor does not change the verdict."""
    res = SuiteResult("addcyclic", n, p)
    ps, big = build(n, p), build(n + 1, p)
    for X in _random_spaces(ps.dimV, p, trials, np.random.default_rng(seed)):
        a = engine.is_capable(ps, X).capable
        b = engine.is_capable(big, extend_with_central(X, n)).capable
        res.record(a == b, X, f"capable {a} vs extended {b}")
    return res


def coprod(n: int, p: int, trials: int = 100, seed: int = 0) -> SuiteResult:
    """2-nilpotent products of two nontrivial factors are capable.

    The generators are split as ``a = n // 2`` and ``b = n - a``.
    """
    res = SuiteResult("coprod", n, p)
    if n < 2:
        return res
    a, b = n // 2, n - n // 2
    ps = build(n, p)
    rng = np.random.default_rng(seed)
    da, db = a * (a - 1) // 2, b * (b - 1) // 2
    for _ in range(trials):
        Xa = _random_spaces(da, p, 1, rng)[0]
        Xb = _random_spaces(db, p, 1, rng)[0]
        X = coproduct(Xa, Xb, a, b)
        res.record(engine.is_capable(ps, X).capable, X, f"a={a} b={b}")
    return res


def limits(n: int, p: int, trials: int = 100, seed: int = 0) -> SuiteResult:
    """dim Y_X = n dim X for dim X in {1, 2}; for n >= 4 the two k = 3
    examples give kn and kn - 1."""
    res = SuiteResult("limits", n, p)
    ps = build(n, p)
    rng = np.random.default_rng(seed)
    for k in (1, 2):
        if k > ps.dimV:
            continue
        for X in sample_subspaces(ps.dimV, p, k, trials, rng):
            dy = engine.compute_Y(ps, X).dim
            res.record(dy == n * k, X, f"dim Y = {dy}, expected {n * k}")
    if n >= 4:
        X1 = coordinate_subspace(n, p, [(2, 1), (3, 1), (4, 1)])
        X2 = coordinate_subspace(n, p, [(2, 1), (3, 1), (3, 2)])
        y1, y2 = engine.compute_Y(ps, X1).dim, engine.compute_Y(ps, X2).dim
        res.record(y1 == 3 * n, X1, f"dim Y = {y1}, expected {3 * n}")
        res.record(y2 == 3 * n - 1, X2, f"dim Y = {y2}, expected {3 * n - 1}")
    return res


def hn(n: int, p: int, trials: int = 200, seed: int = 0) -> SuiteResult:
    """Capable implies the Heineken-Nikolova bound; the general sufficient
    condition implies capable."""
    res = SuiteResult("hn", n, p)
    ps = build(n, p)
    for X in _random_spaces(ps.dimV, p, trials, np.random.default_rng(seed)):
        rep = engine.is_capable(ps, X)
        res.record(rep.hn_ok or not rep.capable, X, "capable but violates the bound")
        res.record(rep.capable or not rep.general_sufficient, X, "sufficient condition holds but not capable")
        res.record(rep.hn_ok == engine.hn_bound_check(ps, X), X, "hn_ok disagrees with hn_bound_check")
    return res


def crosscheck(n: int, p: int, trials: int = 100, seed: int = 0) -> SuiteResult:
    """Group oracle against the phi matrices and against compute_Y."""
    res = SuiteResult("crosscheck", n, p)
    ps = build(n, p)
    res.record(oracle.phi_crosscheck(ps), None, "phi_crosscheck")
    for X in _random_spaces(ps.dimV, p, trials, np.random.default_rng(seed)):
        res.record(oracle.group_level_YX(ps, X) == engine.compute_Y(ps, X), X, "group-level Y differs")
    return res


SUITES = {
    "coordsub": coordsub,
    "addcyclic": addcyclic,
    "coprod": coprod,
    "limits": limits,
    "hn": hn,
    "crosscheck": crosscheck,
}


def run_suite(name: str, n: int, p: int, trials: int | None = None, seed: int = 0) -> SuiteResult:
    fn = SUITES[name]
    return fn(n, p, seed=seed) if trials is None else fn(n, p, trials=trials, seed=seed)
