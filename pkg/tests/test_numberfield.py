import random

import pytest

from dstau.numberfield import (
    CompositumError,
    FieldElement,
    FieldMismatchError,
    InvalidFieldError,
    NonRationalError,
    adjoin_root,
    cyclotomic_field,
    element_from_json,
    fe_arith,
    fe_project_rational,
    field_make,
    quadratic_field,
    rational_field,
)
from dstau.qpoly import cyclotomic
from dstau.rational import QQ


def test_degree_one_quotient_is_rational_field():
    f = field_make([0, 1], "Q")  # min_poly = x
    assert f.degree == 1
    e = f.from_rational(QQ(7, 3))
    assert len(e.coords) == 1
    assert fe_project_rational(e) == QQ(7, 3)


def test_sqrt2_defining_relation():
    f = field_make([-2, 0, 1], "Q(sqrt2)")
    x = f.gen()
    assert fe_project_rational(x * x) == 2


def test_cyclotomic3_identities():
    f = field_make([1, 1, 1], "Q(omega_3)")
    w = f.gen()
    assert (w ** 3) == f.one
    assert w + w * w + f.one == f.zero


def test_field_make_rejects_bad_polys():
    with pytest.raises(InvalidFieldError):
        field_make([2, 0, 2], "bad")  # not monic
    with pytest.raises(InvalidFieldError):
        field_make([5], "bad")  # degree 0


def test_fe_arith_examples():
    f2 = quadratic_field(2)
    s2 = f2.gen()
    assert fe_arith(f2.one + s2, s2 - f2.one, "mul") == f2.one
    c3 = cyclotomic_field(3)
    w = c3.gen()
    assert fe_arith(w, w * w, "mul") == c3.one
    q = rational_field()
    assert fe_arith(
        q.from_rational(QQ(3, 4)), q.from_rational(QQ(-1, 2)), "div"
    ) == q.from_rational(QQ(-3, 2))


def test_division_by_zero_and_field_mismatch():
    f2 = quadratic_field(2)
    with pytest.raises(ZeroDivisionError):
        fe_arith(f2.one, f2.zero, "div")
    f3 = quadratic_field(3)
    with pytest.raises(FieldMismatchError):
        fe_arith(f2.one, f3.one, "add")


def test_project_rational():
    f2 = quadratic_field(2)
    assert fe_project_rational(f2.element([QQ(5, 2), 0])) == QQ(5, 2)
    c3 = cyclotomic_field(3)
    w = c3.gen()
    assert fe_project_rational(c3.one + w + w * w) == 0
    with pytest.raises(NonRationalError) as err:
        fe_project_rational(f2.gen())
    assert err.value.coords == (QQ(0), QQ(1))


@pytest.mark.parametrize("h", [3, 4, 6, 5])
def test_cyclotomic_root_orders(h):
    f = cyclotomic_field(h)
    w = f.gen()
    assert w ** h == f.one
    for k in range(1, h):
        assert w ** k != f.one


def test_field_axioms_randomized():
    rng = random.Random(20260810)
    fields = [rational_field(), quadratic_field(2), cyclotomic_field(6)]
    f12, _, _ = adjoin_root(quadratic_field(2), (QQ(-3), QQ(0), QQ(1)), "Q(s2,s3)")
    fields.append(f12)
    for f in fields:
        def rand():
            return f.element(
                [QQ(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(f.degree)]
            )

        for _ in range(25):
            a, b, c = rand(), rand(), rand()
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if a:
                assert a * a.inverse() == f.one
                assert fe_project_rational(a * a.inverse()) == 1


def test_compositum_sqrt2_sqrt3():
    f2 = quadratic_field(2)
    f, embed, r3 = adjoin_root(f2, (QQ(-3), QQ(0), QQ(1)), "Q(sqrt2,sqrt3)")
    assert f.degree == 4
    s2 = embed(f2.gen())
    assert fe_project_rational(s2 * s2) == 2
    assert fe_project_rational(r3 * r3) == 3
    s6 = s2 * r3
    assert fe_project_rational(s6 * s6) == 6


def test_adjoin_existing_root_is_identity():
    f2 = quadratic_field(2)
    f2b, embed, r8 = adjoin_root(f2, (QQ(-8), QQ(0), QQ(1)), "unused")
    assert f2b is f2
    assert r8 == f2.gen() * f2.from_rational(2)


def test_compositum_degree_cap():
    big = cyclotomic_field(67)  # degree 66
    with pytest.raises(CompositumError):
        adjoin_root(big, (QQ(-2), QQ(0), QQ(1)), "too-big")


def test_embedding_preserves_arithmetic():
    f2 = quadratic_field(2)
    f, embed, _ = adjoin_root(f2, cyclotomic(6), "Q(sqrt2,omega6)")
    assert f.degree == 4
    a = f2.element([QQ(1, 2), QQ(3)])
    b = f2.element([QQ(-2), QQ(1, 5)])
    assert embed(a * b) == embed(a) * embed(b)
    assert embed(a + b) == embed(a) + embed(b)


def test_element_serialization_roundtrip():
    f = quadratic_field(2)
    e = f.element([QQ(5, 3), QQ(-7, 2)])
    assert element_from_json(f, e.to_json()) == e
    as_json = e.to_json()
    assert as_json == {"field": "Q(sqrt2)", "coords": ["5/3", "-7/2"]}
