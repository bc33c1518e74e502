"""Group presentations as text, and the subspaces X they determine.

File format::

    # comments start with '#'
    n=4 p=3
    [3,1][3,2]^-1
    [3,1][4,1]^-1
    [4,2]
    [4,3]
    [2,1]

Each relator line is a product of generator commutators ``[j,i]`` (``j > i``)
with optional integer exponents.  The relations ``x_i^p = e`` and class two are
implicit.  Alternatively a ``raw-V n=.. p=..`` header is followed by basis
vectors of X as comma-separated residues in the pair order of
:mod:`capacheck.phi`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb

import numpy as np

from . import oracle
from .linalg import DTYPE, FieldError, Subspace, check_prime
from .phi import build, pair_list

__all__ = [
    "Presentation",
    "PresentationError",
    "RelatorError",
    "parse",
    "to_subspace",
    "format_presentation",
    "build_extraspecial",
    "coproduct",
    "extend_with_central",
    "coordinate_subspace",
    "embed",
]

Word = tuple[tuple[int, int], ...]


class PresentationError(ValueError):
    """Malformed presentation text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class RelatorError(ValueError):
    """A relator does not lie in the commutator subgroup."""


@dataclass(frozen=True)
class Presentation:
    n: int
    p: int
    # each relator as commutator tokens (j, i, e), read left to right
    relators: tuple[tuple[tuple[int, int, int], ...], ...]

    def words(self) -> list[Word]:
        """Relators spelled out as words in the generators."""
        return [commutator_word(r) for r in self.relators]


def commutator_word(tokens) -> Word:
    """``[j,i]^e`` tokens as ``(generator, exponent)`` letters; ``[x,y] = x^-1 y^-1 x y``."""
    letters = []
    for j, i, e in tokens:
        unit = [(j, -1), (i, -1), (j, 1), (i, 1)]
        if e < 0:
            unit = [(s, -x) for s, x in reversed(unit)]
        letters.extend(unit * abs(e))
    return tuple(letters)


_HEADER = re.compile(r"^(raw-V\s+)?n\s*=\s*(-?\d+)\s+p\s*=\s*(-?\d+)\s*$")
_TOKEN = re.compile(r"\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\](?:\s*\^\s*(-?\d+))?")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse(text: str) -> Presentation:
    lines = text.splitlines()
    body = [(k + 1, _strip(raw)) for k, raw in enumerate(lines)]
    body = [(k, s) for k, s in body if s.strip()]
    if not body:
        raise PresentationError("empty input: expected header 'n=<int> p=<prime>'", 1, 1)
    lineno, header = body[0]
    m = _HEADER.match(header.strip())
    if not m:
        raise PresentationError(
            f"bad header {header.strip()!r}: expected 'n=<int> p=<prime>' or 'raw-V n=<int> p=<prime>'",
            lineno,
            1,
        )
    raw = m.group(1) is not None
    n, p = int(m.group(2)), int(m.group(3))
    try:
        p = check_prime(p)
    except FieldError as err:
        raise PresentationError(str(err), lineno, header.find("p") + 1) from None
    if n < 2:
        raise PresentationError(f"n = {n}: need at least 2 generators", lineno, header.find("n") + 1)

    relators = []
    for lineno, line in body[1:]:
        if raw:
            relators.append(_parse_raw_line(line, lineno, n, p))
        else:
            relators.append(_parse_relator(line, lineno, n))
    return Presentation(n, p, tuple(relators))


def _parse_relator(line: str, lineno: int, n: int) -> tuple:
    tokens = []
    pos = 0
    while pos < len(line):
        if line[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(line, pos)
        if not m:
            raise PresentationError(f"unexpected {line[pos:pos + 8]!r}, expected '[j,i]' or '[j,i]^e'", lineno, pos + 1)
        j, i = int(m.group(1)), int(m.group(2))
        e = int(m.group(3)) if m.group(3) is not None else 1
        for g in (j, i):
            if not 1 <= g <= n:
                raise PresentationError(f"generator index {g} outside 1..{n}", lineno, pos + 1)
        if not j > i:
            raise PresentationError(f"commutator [{j},{i}] must have j > i", lineno, pos + 1)
        tokens.append((j, i, e))
        pos = m.end()
    return tuple(tokens)


def _parse_raw_line(line: str, lineno: int, n: int, p: int) -> tuple:
    d = comb(n, 2)
    fields = [f.strip() for f in line.split(",")]
    if len(fields) != d:
        raise PresentationError(f"expected {d} comma-separated residues, got {len(fields)}", lineno, 1)
    try:
        coords = [int(f) % p for f in fields]
    except ValueError:
        raise PresentationError(f"non-integer entry in {line.strip()!r}", lineno, 1) from None
    return tuple((j, i, c) for (j, i), c in zip(pair_list(n), coords) if c)


def format_presentation(pres: Presentation) -> str:
    out = [f"n={pres.n} p={pres.p}"]
    for rel in pres.relators:
        out.append("".join(f"[{j},{i}]" + (f"^{e}" if e != 1 else "") for j, i, e in rel) or "[2,1]^0")
    return "\n".join(out) + "\n"


def relator_vector(pres: Presentation, word: Word) -> np.ndarray:
    """Evaluate ``word`` in the class-two quotient; returns its V-coordinates."""
    g = oracle.from_word(pres.n, pres.p, word)
    if any(g.a):
        raise RelatorError(
            f"relator has generator exponents {g.a}; relators must lie in the commutator subgroup"
        )
    return np.array(g.b, dtype=DTYPE)


def to_subspace(pres: Presentation) -> Subspace:
    ps = build(pres.n, pres.p)
    rows = [relator_vector(pres, w) for w in pres.words()]
    return ps.span_V(rows) if rows else ps.zero_V()


def build_extraspecial(p: int) -> Presentation:
    """Extra-special group of order p^5 on four generators."""
    text = f"n=4 p={p}\n[3,1][3,2]^-1\n[3,1][4,1]^-1\n[4,2]\n[4,3]\n[2,1]\n"
    return parse(text)


def _rank_from_dim(d: int) -> int:
    n = 1
    while comb(n, 2) < d:
        n += 1
    if comb(n, 2) != d:
        raise ValueError(f"{d} is not a binomial coefficient C(n, 2)")
    return n


def embed(X: Subspace, n_from: int, n_to: int, shift: int = 0) -> Subspace:
    """Relabel ``x_t -> x_(t+shift)`` and view X inside V for ``n_to`` generators."""
    if n_from + shift > n_to:
        raise ValueError("embedding does not fit")
    src = pair_list(n_from)
    dst = {t: c for c, t in enumerate(pair_list(n_to))}
    out = np.zeros((X.dim, comb(n_to, 2)), dtype=DTYPE)
    for c, (j, i) in enumerate(src):
        out[:, dst[(j + shift, i + shift)]] = X.basis[:, c]
    return Subspace.span(out, X.p, comb(n_to, 2))


def coproduct(Xa: Subspace, Xb: Subspace, a: int | None = None, b: int | None = None) -> Subspace:
    """Subspace for the 2-nilpotent product of the groups given by ``Xa`` and ``Xb``.

    Generators of the first factor keep indices ``1..a``; those of the second
    become ``a+1..a+b``.  ``a``/``b`` default to the rank implied by the
    ambient dimension (1 for a zero-dimensional V, i.e. a cyclic factor).
    """
    if Xa.p != Xb.p:
        raise ValueError("factors over different primes")
    a = a if a is not None else _rank_from_dim(Xa.ambient_dim)
    b = b if b is not None else _rank_from_dim(Xb.ambient_dim)
    n = a + b
    left = embed(Xa, a, n)
    right = embed(Xb, b, n, shift=a)
    return Subspace.span(np.vstack([left.basis, right.basis]), Xa.p, comb(n, 2))


def extend_with_central(X: Subspace, n: int | None = None) -> Subspace:
    """``X ⊕ <v_(n+1)i : 1 <= i <= n>``: the subspace of ``G ⊕ C_p``."""
    n = n if n is not None else _rank_from_dim(X.ambient_dim)
    big = embed(X, n, n + 1)
    ps = build(n + 1, X.p)
    extra = np.array([ps.v(n + 1, i) for i in range(1, n + 1)])
    return Subspace.span(np.vstack([big.basis, extra]), X.p, ps.dimV)


def coordinate_subspace(n: int, p: int, S) -> Subspace:
    ps = build(n, p)
    rows = [ps.v(j, i) for j, i in S]
    return ps.span_V(rows) if rows else ps.zero_V()
