"""Bridge between :class:`LaurentPolynomial` and sympy, used only for factoring."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .polynomial import LaurentPolynomial


def to_sympy(p):
    syms = {v: sympy.Symbol(v) for v in p.variables}
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in zip(p.variables, e):
            if k:
                term *= syms[v] ** k
        expr += term
    return expr


def from_sympy(expr, variables=()):
    poly = sympy.Poly(sympy.expand(expr), *[sympy.Symbol(v) for v in variables]) if variables else None
    if poly is None or not poly.gens:
        free = sorted(str(s) for s in sympy.expand(expr).free_symbols)
        return from_sympy(expr, free) if free else LaurentPolynomial.constant(_frac(expr), ())
    terms = {}
    for monom, c in poly.terms():
        terms[tuple(int(k) for k in monom)] = _frac(c)
    return LaurentPolynomial(tuple(variables), terms)


def _frac(c):
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def factor(p):
    """``(constant, [(factor, multiplicity)])`` over Q with primitive integer factors.

    ``p`` must be a polynomial (no negative exponents).
    """
    if not p.is_polynomial():
        raise ValueError("factor() needs non-negative exponents")
    variables = p.used_variables()
    if not variables:
        return p.constant_term(), []
    gens = [sympy.Symbol(v) for v in variables]
    const, facs = sympy.factor_list(to_sympy(p), *gens)
    out = [(from_sympy(f, variables).trimmed(), int(k)) for f, k in facs]
    return _frac(const), out


def cancel(num, den):
    """Reduce ``num/den`` to lowest terms; returns two polynomials."""
    variables = tuple(sorted(set(num.used_variables()) | set(den.used_variables())))
    n, d = sympy.fraction(sympy.cancel(to_sympy(num) / to_sympy(den)))
    return from_sympy(n, variables).trimmed(), from_sympy(d, variables).trimmed()


def divide_exact(a, b):
    """``a / b`` when ``b`` divides ``a`` exactly; raises ValueError otherwise."""
    variables = tuple(sorted(set(a.used_variables()) | set(b.used_variables())))
    gens = [sympy.Symbol(v) for v in variables]
    if not gens:
        return LaurentPolynomial.constant(a.constant_term() / b.constant_term())
    q, r = sympy.div(to_sympy(a), to_sympy(b), *gens)
    if r != 0:
        raise ValueError(f"{b} does not divide {a}")
    return from_sympy(q, variables).trimmed()
