from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from logtc import symbolic
from logtc.divisors import DivisorClass
from logtc.errors import SchemaError
from logtc.polynomial import LaurentPolynomial, poly_from_json, poly_to_json

P = LaurentPolynomial.parse
V = ("x", "y")

laurent = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                          st.fractions(min_value=-20, max_value=20, max_denominator=5),
                          max_size=5).map(lambda d: LaurentPolynomial(V, d))


def test_parse_and_print_are_canonical():
    f = P("a0 + 3/2*x^2 - u*z", ("x",))
    assert str(f) == "a0 - u*z + 3/2*x^2"
    assert P(str(f)) == f


def test_parse_negative_exponent():
    f = P("x^-2*y + 1", V)
    assert f.terms == {(-2, 1): 1, (0, 0): 1}


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        P("x +* y")
    with pytest.raises(ValueError):
        P("")


def test_negative_power_of_monomial():
    # regression: the exponent was negated twice
    m = P("3*x^2*y^-1", V)
    assert m ** -1 == P("1/3*x^-2*y", V)
    assert m ** -2 == P("1/9*x^-4*y^2", V)
    assert m * m.inverse() == 1


def test_negative_power_needs_monomial():
    with pytest.raises(ValueError):
        P("x + 1", V) ** -1


def test_equality_ignores_variable_order_and_unused_variables():
    assert P("x + y", ("x", "y", "z")) == P("y + x", ("y", "x"))
    assert LaurentPolynomial.constant(2, V) == 2


def test_degree_and_constant_term():
    f = P("1 + z + z^2 + z^3 + z^4", ("z",))
    assert f.degree(("z",)) == 4
    assert f.constant_term() == 1
    assert f.is_polynomial() and not P("z^-1", ("z",)).is_polynomial()


@given(laurent, laurent, laurent)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0


@given(laurent)
def test_string_round_trip(f):
    assert P(str(f), V) == f


@given(laurent)
def test_json_round_trip(f):
    assert poly_from_json(poly_to_json(f, V), V) == f


def test_json_symbolic_coefficients():
    f = P("a0 + 2*a1*x + c0^2*x^2", ("x",))
    data = poly_to_json(f, ("x",))
    assert data[0] == {"exp": [0], "coeff": {"sym": "a0"}}
    assert data[1] == {"exp": [1], "coeff": {"sym": "a1", "scale": "2"}}
    assert poly_from_json(data, ("x",)) == f


@pytest.mark.parametrize("bad", [
    {"exp": [0]},
    {"exp": [0, 1], "coeff": "1"},
    {"exp": [0], "coeff": "1/0"},
    {"exp": [0], "coeff": 3},
])
def test_json_errors_name_the_term(bad):
    with pytest.raises(SchemaError) as exc:
        poly_from_json([bad], ("x",), "$.walls[0].poly")
    assert exc.value.path.startswith("$.walls[0].poly[0]")


def test_factor_and_divide_exact():
    const, facs = symbolic.factor(P("u^2 - z^2", ("z", "u")))
    assert const == -1
    assert sorted(str(f) for f, _ in facs) == ["-u + z", "u + z"]
    assert symbolic.divide_exact(P("u^2 - z^2", ("z", "u")), P("u - z", ("z", "u"))) == \
        P("u + z", ("z", "u"))
    with pytest.raises(ValueError):
        symbolic.divide_exact(P("u^2 + 1", ("u",)), P("u", ("u",)))


def test_cancel_reduces_fraction():
    n, d = symbolic.cancel(P("a0*b0", ()), P("a0^2", ()))
    assert (n, d) == (P("b0"), P("a0"))


# --- divisor classes ------------------------------------------------------------

def test_divisor_class_arithmetic():
    a = DivisorClass("D", {"N[Y1/D]": 1, "p": 2})
    b = DivisorClass("D", {"p": -2, "q": Fraction(1, 2)})
    assert a + b == DivisorClass("D", {"N[Y1/D]": 1, "q": Fraction(1, 2)})
    assert (a - a).is_zero()
    assert a.is_effective() and not b.is_effective()
    assert DivisorClass("D", {"p": 1}).le(a)
    assert 2 * a == a + a


def test_divisor_class_string_order():
    c = DivisorClass("S1", {"Xi_uaxis(u=0)": -2, "E_X3(u + z)": -1, "f*uaxis": 2, "f*N": 1})
    assert str(c) == "f*N + 2*f*uaxis - E_X3(u + z) - 2*Xi_uaxis(u=0)"


def test_divisor_class_wraps_factor_names():
    c = DivisorClass("rho_x", {"1 + 2*x": 1, "1 + x": 1})
    assert str(c) == "(1 + 2*x) + (1 + x)"


def test_divisor_classes_on_different_strata_do_not_mix():
    with pytest.raises(ValueError):
        DivisorClass("A", {"p": 1}) + DivisorClass("B", {"p": 1})


def test_divisor_degree():
    c = DivisorClass("D", {"a": 2, "b": -1})
    assert c.degree({"a": 3, "b": 1}) == 5
    assert c.degree({"a": 3}) is None
