"""Exhaustive and sampled sweeps over subspaces of V.

Subspaces of F_p^d of dimension k are visited through their RREF bases: pivot
patterns in lexicographic order of the pivot-column sets, and within a
pattern the free entries counted in base p, row-major (first free entry most
significant).  Work is cut into shards ``(k, pattern, start, stop)`` so that a
census can be spread over processes, checkpointed, and merged in a fixed
order that does not depend on the worker count.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterator

import numpy as np

from . import engine
from .linalg import DTYPE, Subspace, check_prime
from .phi import build

__all__ = [
    "BudgetExceededError",
    "CensusReport",
    "SubspaceIterator",
    "census",
    "count_subspaces",
    "dimY_profile",
    "gaussian_binomial",
    "iterate_subspaces",
    "sample_subspaces",
    "AUDIT_RULES",
]

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
SHARD_SIZE = 512
AUDIT_RULES = (
    "dim_le_2_capable",
    "coordinate_capable",
    "capable_hn_bound",
    "dimY_full_rank",
    "reduce_special_agrees",
    "general_sufficient_capable",
    "missing_index_capable",
    "X_in_Z",
)
MAX_RECORDED_VIOLATIONS = 20


class BudgetExceededError(RuntimeError):
    def __init__(self, count: int, budget: int):
        self.count, self.budget = count, budget
        super().__init__(f"run would visit {count} subspaces, budget is {budget}")


def gaussian_binomial(d: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^d."""
    if k < 0 or k > d:
        return 0
    num = den = 1
    for t in range(k):
        num *= p ** (d - t) - 1
        den *= p ** (t + 1) - 1
    return num // den


def count_subspaces(d: int, p: int, k: int) -> int:
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    return gaussian_binomial(d, k, p)


def free_positions(pivots: tuple[int, ...], d: int) -> list[tuple[int, int]]:
    """Free (row, column) slots of an RREF matrix with the given pivots, row-major."""
    piv = set(pivots)
    return [(row, c) for row, pc in enumerate(pivots) for c in range(pc + 1, d) if c not in piv]


def pivot_patterns(d: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.combinations(range(d), k)


def _digits(index: int, nfree: int, p: int) -> list[int]:
    out = [0] * nfree
    for t in range(nfree - 1, -1, -1):
        index, out[t] = divmod(index, p)
    return out


def _pattern_block(pivots, d: int, p: int, start: int, stop: int) -> np.ndarray:
    """RREF bases for free-entry indices ``start..stop-1`` of one pattern, shape (m, k, d)."""
    k = len(pivots)
    slots = free_positions(pivots, d)
    count = stop - start
    base = np.zeros((k, d), dtype=DTYPE)
    for row, pc in enumerate(pivots):
        base[row, pc] = 1
    block = np.broadcast_to(base, (count, k, d)).copy()
    if slots:
        idx = np.arange(start, stop, dtype=np.int64)
        for t in range(len(slots) - 1, -1, -1):
            row, c = slots[t]
            block[:, row, c] = idx % p
            idx //= p
    return block


@dataclass
class SubspaceIterator:
    """All k-dimensional subspaces of F_p^d, each exactly once."""

    d: int
    p: int
    k: int

    def __post_init__(self):
        check_prime(self.p)
        count_subspaces(self.d, self.p, self.k)

    def __len__(self) -> int:
        return gaussian_binomial(self.d, self.k, self.p)

    def __iter__(self) -> Iterator[Subspace]:
        for pivots in pivot_patterns(self.d, self.k):
            nfree = len(free_positions(pivots, self.d))
            block = _pattern_block(pivots, self.d, self.p, 0, self.p**nfree)
            for basis in block:
                yield Subspace(self.p, self.d, basis, pivots)


def iterate_subspaces(d: int, p: int, k: int | None = None) -> Iterator[Subspace]:
    dims = range(d + 1) if k is None else [k]
    for kk in dims:
        yield from SubspaceIterator(d, p, kk)


def sample_subspaces(d: int, p: int, k: int, count: int, rng: np.random.Generator) -> list[Subspace]:
    """``count`` independent uniform draws from the k-dimensional subspaces.

    A pivot pattern is chosen with probability proportional to the number of
    RREF matrices it carries, then its free entries uniformly.
    """
    patterns = list(pivot_patterns(d, k))
    sizes = np.array([p ** len(free_positions(pv, d)) for pv in patterns], dtype=float)
    choice = rng.choice(len(patterns), size=count, p=sizes / sizes.sum())
    out = []
    for t in choice:
        pv = patterns[t]
        slots = free_positions(pv, d)
        basis = np.zeros((k, d), dtype=DTYPE)
        for row, pc in enumerate(pv):
            basis[row, pc] = 1
        for (row, c), x in zip(slots, rng.integers(0, p, size=len(slots))):
            basis[row, c] = x
        out.append(Subspace(p, d, basis, pv))
    return out


# --- census -----------------------------------------------------------------


@dataclass(frozen=True)
class Shard:
    index: int
    k: int
    pivots: tuple[int, ...] | None  # None in sampling mode
    start: int
    stop: int
    seed: int | None = None


@dataclass
class DimStats:
    total: int = 0
    capable: int = 0
    dimY: Counter = field(default_factory=Counter)

    @property
    def noncapable(self) -> int:
        return self.total - self.capable


@dataclass
class CensusReport:
    n: int
    p: int
    dims: list[int]
    sampled: int | None
    per_dim: dict[int, DimStats]
    violations: dict[str, int]
    violation_examples: list[dict]
    noncapable_examples: list[list[list[int]]]
    watched: dict[str, bool | None]

    @property
    def total(self) -> int:
        return sum(s.total for s in self.per_dim.values())

    @property
    def capable(self) -> int:
        return sum(s.capable for s in self.per_dim.values())

    @property
    def noncapable(self) -> int:
        return self.total - self.capable

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> dict:
        return {
            "schema": "capacheck/1",
            "kind": "census",
            "n": self.n,
            "p": self.p,
            "dims": self.dims,
            "sampled_per_dim": self.sampled,
            "total": self.total,
            "capable": self.capable,
            "noncapable": self.noncapable,
            "per_dim": {
                str(k): {
                    "total": s.total,
                    "capable": s.capable,
                    "noncapable": s.noncapable,
                    "dimY_histogram": {str(y): c for y, c in sorted(s.dimY.items())},
                }
                for k, s in sorted(self.per_dim.items())
            },
            "violations": dict(self.violations),
            "violation_examples": self.violation_examples,
            "noncapable_examples": self.noncapable_examples,
            "watched": self.watched,
            "ok": self.ok,
        }

    def to_csv(self) -> str:
        lines = ["k,verdict,count"]
        for k, s in sorted(self.per_dim.items()):
            lines.append(f"{k},capable,{s.capable}")
            lines.append(f"{k},noncapable,{s.noncapable}")
        return "\n".join(lines) + "\n"


def _shards(n: int, p: int, dims, sample: int | None, seed: int) -> list[Shard]:
    d = comb(n, 2)
    shards = []
    if sample is None:
        for k in dims:
            for pv in pivot_patterns(d, k):
                total = p ** len(free_positions(pv, d))
                for start in range(0, total, SHARD_SIZE):
                    shards.append(Shard(len(shards), k, pv, start, min(total, start + SHARD_SIZE)))
    else:
        seeds = np.random.SeedSequence(seed)
        for k in dims:
            for start in range(0, sample, SHARD_SIZE):
                child = int(seeds.spawn(1)[0].generate_state(1)[0])
                shards.append(Shard(len(shards), k, None, start, min(sample, start + SHARD_SIZE), child))
    return shards


def _run_shard(n: int, p: int, shard: Shard, watch: dict, check_reduction: bool) -> dict:
    ps = build(n, p)
    d = ps.dimV
    k = shard.k
    if shard.pivots is not None:
        block = _pattern_block(shard.pivots, d, p, shard.start, shard.stop)
        spaces = (Subspace(p, d, b, shard.pivots) for b in block)
    else:
        rng = np.random.default_rng(shard.seed)
        spaces = iter(sample_subspaces(d, p, k, shard.stop - shard.start, rng))

    watch_keys = {X.key(): name for name, X in watch.items() if X.dim == k}
    total = capable = 0
    dimY: Counter = Counter()
    violations = Counter()
    examples: list[dict] = []
    noncap: list = []
    seen: dict[str, bool] = {}

    def flag(rule: str, X: Subspace) -> None:
        violations[rule] += 1
        if len(examples) < MAX_RECORDED_VIOLATIONS:
            examples.append({"rule": rule, "X": [list(v) for v in X.vectors()]})

    for X in spaces:
        rep = engine.is_capable(ps, X)
        total += 1
        capable += rep.capable
        dimY[rep.dimY] += 1
        if not rep.capable and len(noncap) < 5:
            noncap.append([list(v) for v in X.vectors()])
        if X.key() in watch_keys:
            seen[watch_keys[X.key()]] = rep.capable
        if rep.sufficient_hit and not rep.capable:
            flag("dim_le_2_capable", X)
        if rep.coordinate and not rep.capable:
            flag("coordinate_capable", X)
        if rep.capable and not rep.hn_ok:
            flag("capable_hn_bound", X)
        if k in (1, 2) and rep.dimY != n * k:
            flag("dimY_full_rank", X)
        if rep.general_sufficient and not rep.capable:
            flag("general_sufficient_capable", X)
        if rep.missing_index and not rep.capable:
            flag("missing_index_capable", X)
        if not (X <= rep.Z):
            flag("X_in_Z", X)
        if check_reduction:
            red = engine.reduce_special(ps, X)
            if red.r == 0:
                # no central factor: the reduced instance is X itself
                agrees = red.m == n and red.X_reduced == X
            else:
                agrees = red.capable == rep.capable
            if not agrees:
                flag("reduce_special_agrees", X)
    return {
        "index": shard.index,
        "k": k,
        "total": total,
        "capable": capable,
        "dimY": {str(y): c for y, c in dimY.items()},
        "violations": dict(violations),
        "examples": examples,
        "noncapable": noncap,
        "watched": seen,
    }


def _merge(n, p, dims, sample, results: list[dict], watch) -> CensusReport:
    per_dim = {k: DimStats() for k in dims}
    violations = {rule: 0 for rule in AUDIT_RULES}
    examples: list[dict] = []
    noncap: list = []
    watched: dict[str, bool | None] = {name: None for name in watch}
    for res in sorted(results, key=lambda r: r["index"]):
        s = per_dim[res["k"]]
        s.total += res["total"]
        s.capable += res["capable"]
        s.dimY.update({int(y): c for y, c in res["dimY"].items()})
        for rule, c in res["violations"].items():
            violations[rule] += c
        examples.extend(res["examples"])
        noncap.extend(res["noncapable"])
        watched.update(res["watched"])
    return CensusReport(
        n=n,
        p=p,
        dims=list(dims),
        sampled=sample,
        per_dim=per_dim,
        violations=violations,
        violation_examples=examples[:MAX_RECORDED_VIOLATIONS],
        noncapable_examples=noncap[:10],
        watched=watched,
    )


def _budget_from_env(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("CAPACHECK_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _write_checkpoint(path: Path, meta: dict, results: dict[int, dict]) -> None:
    payload = {"meta": meta, "completed": [results[i] for i in sorted(results)]}
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def census(
    n: int,
    p: int,
    dims=None,
    sample: int | None = None,
    workers: int = 1,
    budget: int | None = None,
    seed: int = 0,
    resume: str | os.PathLike | None = None,
    watch: dict[str, Subspace] | None = None,
    check_reduction: bool = True,
) -> CensusReport:
    """Run the capability check over every (or a sample of) subspace X of V.

    ``dims`` restricts to the given dimensions of X; ``sample`` draws that many
    uniform subspaces per dimension instead of enumerating.  ``resume`` names a
    checkpoint file that is read if present and rewritten after each shard.
    ``watch`` maps names to subspaces whose verdicts are reported individually.
    """
    ps = build(n, p)
    d = ps.dimV
    dims = list(range(d + 1)) if dims is None else sorted(set(dims))
    for k in dims:
        count_subspaces(d, p, k)
    visits = sum(gaussian_binomial(d, k, p) for k in dims) if sample is None else sample * len(dims)
    limit = _budget_from_env(budget)
    if visits > limit:
        raise BudgetExceededError(visits, limit)
    watch = dict(watch or {})

    shards = _shards(n, p, dims, sample, seed)
    meta = {"n": n, "p": p, "dims": dims, "sample": sample, "seed": seed, "check_reduction": check_reduction}
    done: dict[int, dict] = {}
    ckpt = Path(resume) if resume is not None else None
    if ckpt is not None and ckpt.exists():
        saved = json.loads(ckpt.read_text())
        if saved.get("meta") != meta:
            raise ValueError(f"checkpoint {ckpt} was written for a different run: {saved.get('meta')}")
        done = {r["index"]: r for r in saved["completed"]}
        log.info("resuming: %d of %d shards already done", len(done), len(shards))

    todo = [s for s in shards if s.index not in done]
    if workers <= 1:
        for s in todo:
            done[s.index] = _run_shard(n, p, s, watch, check_reduction)
            if ckpt is not None:
                _write_checkpoint(ckpt, meta, done)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_shard, n, p, s, watch, check_reduction) for s in todo]
            for fut in as_completed(futures):
                res = fut.result()
                done[res["index"]] = res
                if ckpt is not None:
                    _write_checkpoint(ckpt, meta, done)
    return _merge(n, p, dims, sample, list(done.values()), watch)


def dimY_profile(n: int, p: int, k: int, samples: int | None = None, seed: int = 0) -> Counter:
    """Histogram of ``dim Y_X`` over k-dimensional X (all of them if ``samples`` is None)."""
    ps = build(n, p)
    if samples is None:
        spaces = SubspaceIterator(ps.dimV, p, k)
    else:
        spaces = sample_subspaces(ps.dimV, p, k, samples, np.random.default_rng(seed))
    return Counter(engine.compute_Y(ps, X).dim for X in spaces)
