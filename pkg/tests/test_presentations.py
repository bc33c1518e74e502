import random

import numpy as np
import pytest

from capacheck import engine, oracle
from capacheck.phi import build
from capacheck.presentations import (
    Presentation,
    PresentationError,
    RelatorError,
    build_extraspecial,
    coordinate_subspace,
    coproduct,
    extend_with_central,
    format_presentation,
    parse,
    relator_vector,
    to_subspace,
)


def test_parse_single_relator():
    pres = parse("n=4 p=3\n[3,1][3,2]^-1")
    assert (pres.n, pres.p) == (4, 3)
    assert pres.relators == (((3, 1, 1), (3, 2, -1)),)


def test_parse_free():
    pres = parse("n=2 p=3\n")
    assert pres.relators == ()
    assert to_subspace(pres).dim == 0


def test_parse_comments_and_blank_lines():
    pres = parse("# header follows\n\nn=3 p=5   # trailing\n[2,1]^2  [3,1]\n\n")
    assert pres.relators == (((2, 1, 2), (3, 1, 1)),)


@pytest.mark.parametrize(
    "text,needle,line",
    [
        ("n=2 p=2\n[2,1]", "odd prime", 1),
        ("n=2 p=9\n", "odd prime", 1),
        ("", "empty", 1),
        ("n=2\n", "header", 1),
        ("n=3 p=3\n[2,1]\n[4,1]", "outside 1..3", 3),
        ("n=3 p=3\n[1,2]", "j > i", 2),
        ("n=3 p=3\n[2,1] x1", "unexpected", 2),
        ("n=1 p=3\n", "at least 2", 1),
    ],
)
def test_parse_errors(text, needle, line):
    with pytest.raises(PresentationError) as info:
        parse(text)
    assert needle in str(info.value)
    assert info.value.line == line


def test_error_column():
    with pytest.raises(PresentationError) as info:
        parse("n=3 p=3\n[2,1] [5,1]")
    assert info.value.column == 7


@pytest.mark.parametrize("p", [3, 5, 7])
def test_extraspecial_subspace(p):
    ps = build(4, p)
    X = to_subspace(build_extraspecial(p))
    v = ps.vector
    expected = ps.span_V(
        [v({(3, 1): 1, (3, 2): -1}), v({(3, 1): 1, (4, 1): -1}), v({(4, 2): 1}), v({(4, 3): 1}), v({(2, 1): 1})]
    )
    assert X == expected and X.dim == 5
    assert len(build_extraspecial(p).relators) == 5


def test_all_commutators_give_V():
    ps = build(4, 3)
    text = "n=4 p=3\n" + "\n".join(f"[{j},{i}]" for j, i in ps.pairs)
    assert to_subspace(parse(text)) == ps.full_V()


def test_raw_V():
    pres = parse("raw-V n=3 p=5\n1,0,4\n0,1,0\n")
    X = to_subspace(pres)
    assert X == build(3, 5).span_V([[1, 0, 4], [0, 1, 0]])
    with pytest.raises(PresentationError):
        parse("raw-V n=3 p=5\n1,0\n")
    with pytest.raises(PresentationError):
        parse("raw-V n=3 p=5\n1,a,0\n")


def test_relator_must_be_in_commutator_subgroup():
    pres = Presentation(2, 3, ())
    with pytest.raises(RelatorError):
        relator_vector(pres, ((1, 1),))


def test_commutator_word_evaluates_to_basic_commutator():
    pres = parse("n=3 p=5\n[3,2]^-2")
    w = pres.words()[0]
    assert oracle.from_word(3, 5, w) == oracle.power(oracle.basic_commutator(3, 5, 3, 2), -2)


def _random_presentation(rng, n, p):
    pairs = build(n, p).pairs
    rels = []
    for _ in range(rng.randrange(0, 5)):
        toks = tuple((*rng.choice(pairs), rng.randrange(-3, 4)) for _ in range(rng.randrange(1, 4)))
        rels.append(tuple(t for t in toks if t[2]) or ((2, 1, 1),))
    return Presentation(n, p, tuple(rels))


def test_round_trip():
    rng = random.Random(0)
    for _ in range(100):
        n, p = rng.choice([(3, 3), (4, 5), (5, 3)])
        pres = _random_presentation(rng, n, p)
        again = parse(format_presentation(pres))
        assert to_subspace(again) == to_subspace(pres)


def test_relator_order_and_combination():
    rng = random.Random(1)
    for _ in range(60):
        pres = _random_presentation(rng, 4, 3)
        if len(pres.relators) < 2:
            continue
        rels = list(pres.relators)
        shuffled = Presentation(4, 3, tuple(reversed(rels)))
        combined = Presentation(4, 3, (rels[0] + rels[1],) + tuple(rels[1:]))
        X = to_subspace(pres)
        assert to_subspace(shuffled) == X
        assert to_subspace(combined) == X


def test_coproduct_examples():
    V2 = build(2, 3).full_V()
    Z2 = build(2, 3).zero_V()
    assert coproduct(Z2, Z2).dim == 0 and coproduct(Z2, Z2).ambient_dim == 6
    ps = build(4, 3)
    assert coproduct(V2, V2) == ps.span_V([ps.v(2, 1), ps.v(4, 3)])


def test_coproduct_has_no_mixed_coordinates():
    rng = np.random.default_rng(2)
    ps = build(5, 3)
    mixed = [c for c, (j, i) in enumerate(ps.pairs) if i <= 2 < j]
    for _ in range(30):
        Xa = build(2, 3).span_V(rng.integers(0, 3, (1, 1)))
        Xb = build(3, 3).span_V(rng.integers(0, 3, (2, 3)))
        X = coproduct(Xa, Xb, 2, 3)
        assert not X.basis[:, mixed].any()
        assert engine.is_capable(ps, X).capable


def test_extend_with_central():
    X = extend_with_central(build(2, 3).zero_V())
    ps = build(3, 3)
    assert X == ps.span_V([ps.v(3, 1), ps.v(3, 2)])
    big = extend_with_central(to_subspace(build_extraspecial(3)))
    assert big.ambient_dim == 10
    assert not engine.is_capable(build(5, 3), big).capable


def test_coordinate_subspace():
    ps = build(4, 3)
    assert coordinate_subspace(4, 3, []) == ps.zero_V()
    assert coordinate_subspace(4, 3, ps.pairs) == ps.full_V()
    X = coordinate_subspace(4, 3, [(2, 1), (4, 3)])
    assert X.dim == 2 and engine.is_capable(ps, X).capable
    with pytest.raises(IndexError):
        coordinate_subspace(4, 3, [(1, 2)])
