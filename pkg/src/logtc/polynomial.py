"""Sparse Laurent polynomials over the rationals in named variables.

Symbolic wall-function coefficients (``a0``, ``b1`` ...) are modelled as extra
variables, so identities among coefficients are ordinary polynomial identities.
"""

from __future__ import annotations

import re
from fractions import Fraction


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c.strip())
    return Fraction(c)


def format_fraction(c):
    c = _frac(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class LaurentPolynomial:
    """Immutable polynomial ``sum c_e * prod x_i^{e_i}`` with integer exponents.

    Terms are stored in a dict keyed by exponent tuples aligned with
    ``variables``; zero coefficients are never stored.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables=(), terms=None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable names in {variables}")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} does not match variables {variables}")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.variables = variables
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c, variables=()):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name, variables=None):
        variables = tuple(variables) if variables is not None else (name,)
        e = tuple(int(v == name) for v in variables)
        return cls(variables, {e: 1})

    @classmethod
    def monomial(cls, exponents, coeff=1, variables=None):
        """``coeff * z^m``; ``exponents`` is a tuple or a name->power dict."""
        if isinstance(exponents, dict):
            variables = tuple(variables) if variables is not None else tuple(sorted(exponents))
            exponents = tuple(exponents.get(v, 0) for v in variables)
        return cls(variables, {tuple(exponents): coeff})

    # variable bookkeeping -------------------------------------------------
    def with_variables(self, variables):
        """Re-express over ``variables`` (a superset of the used variables)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for v, k in zip(self.variables, e):
                if k:
                    if v not in pos:
                        raise ValueError(f"variable {v} missing from {variables}")
                    ne[pos[v]] = k
            out[tuple(ne)] = c
        return LaurentPolynomial(variables, out)

    def used_variables(self):
        return tuple(v for i, v in enumerate(self.variables)
                     if any(e[i] for e in self.terms))

    def trimmed(self):
        return self.with_variables(self.used_variables())

    def _aligned(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(other)
        if self.variables == other.variables:
            return self, other
        vs = list(self.variables)
        vs += [v for v in other.variables if v not in vs]
        return self.with_variables(vs), other.with_variables(vs)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        a, b = self._aligned(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPolynomial(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._aligned(other)[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._aligned(other)
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPolynomial(a.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers are only defined for monomials")
            (e, c), = self.terms.items()
            return LaurentPolynomial(self.variables, {tuple(k * x for x in e): c ** k})
        result = LaurentPolynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        return self ** -1

    def scale(self, c):
        c = _frac(c)
        return LaurentPolynomial(self.variables, {e: c * x for e, x in self.terms.items()})

    # predicates -----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self, in_variables=None):
        """Constant in ``in_variables`` (default: all variables)."""
        idx = self._indices(in_variables)
        return all(not e[i] for e in self.terms for i in idx)

    def _indices(self, names):
        if names is None:
            return range(len(self.variables))
        return [i for i, v in enumerate(self.variables) if v in set(names)]

    def degree(self, in_variables=None):
        idx = self._indices(in_variables)
        if not self.terms:
            return None
        return max(sum(e[i] for i in idx) for e in self.terms)

    def min_degree(self, in_variables=None):
        idx = self._indices(in_variables)
        if not self.terms:
            return None
        return min(sum(e[i] for i in idx) for e in self.terms)

    def is_polynomial(self):
        return all(x >= 0 for e in self.terms for x in e)

    # structure ------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items())

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def coefficient_split(self, chart_variables):
        """Group as ``{chart exponent: coefficient polynomial in the other variables}``."""
        chart = [v for v in self.variables if v in set(chart_variables)]
        rest = [v for v in self.variables if v not in set(chart_variables)]
        ci = [self.variables.index(v) for v in chart]
        ri = [self.variables.index(v) for v in rest]
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in ci)
            out.setdefault(key, {})
            re_ = tuple(e[i] for i in ri)
            out[key][re_] = c
        return tuple(chart), {k: LaurentPolynomial(rest, v) for k, v in out.items()}

    def truncate(self, keep):
        """Terms whose exponents satisfy the predicate ``keep(exponent)``."""
        return LaurentPolynomial(self.variables, {e: c for e, c in self.terms.items() if keep(e)})

    def substitute(self, values):
        """Replace some variables by rationals or polynomials; other variables stay."""
        rest = [v for v in self.variables if v not in values]
        out = LaurentPolynomial.constant(0, rest)
        for e, c in self.terms.items():
            term = LaurentPolynomial(rest, {tuple(k for v, k in zip(self.variables, e)
                                                  if v not in values): c})
            for v, k in zip(self.variables, e):
                if v in values and k:
                    val = values[v]
                    if not isinstance(val, LaurentPolynomial):
                        val = LaurentPolynomial.constant(val)
                    term = term * val ** k
            out = out + term
        return out

    def rename(self, mapping):
        return LaurentPolynomial(tuple(mapping.get(v, v) for v in self.variables), self.terms)

    def monomial_content(self):
        """Componentwise minimum exponent over all terms (as a name->power dict)."""
        if not self.terms:
            return {}
        mins = [min(e[i] for e in self.terms) for i in range(len(self.variables))]
        return {v: k for v, k in zip(self.variables, mins) if k}

    def leading_coefficient(self):
        if not self.terms:
            return Fraction(0)
        return self.terms[max(self.terms)]

    # comparison -----------------------------------------------------------
    def _key(self):
        t = self.trimmed()
        order = sorted(range(len(t.variables)), key=lambda i: t.variables[i])
        vs = tuple(t.variables[i] for i in order)
        terms = tuple(sorted((tuple(e[i] for i in order), c) for e, c in t.terms.items()))
        return vs, terms

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            try:
                other = LaurentPolynomial.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        # canonical: variables alphabetical, terms by total degree then lex-descending
        t = self.with_variables(sorted(self.used_variables()))
        parts = []
        for e, c in sorted(t.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-k for k in ec[0]))):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(t.variables, e) if k)
            if not mono:
                parts.append(format_fraction(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_fraction(c)}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    # parsing --------------------------------------------------------------
    @classmethod
    def parse(cls, text, variables=None):
        """Parse expressions like ``"a0 + 3/2*x^2 - u*z"`` (no parentheses)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        pieces = re.findall(r"[+-](?:\^-|[^+-])+", s)
        if "".join(pieces) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        acc = {}
        names = []
        for piece in pieces:
            sign = -1 if piece[0] == "-" else 1
            coeff = Fraction(sign)
            expo = {}
            for factor in piece[1:].split("*"):
                m = re.fullmatch(r"(\d+(?:/\d+)?)", factor)
                if m:
                    coeff *= Fraction(m.group(1))
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", factor)
                if not m:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                name, k = m.group(1), int(m.group(2) or 1)
                expo[name] = expo.get(name, 0) + k
                if name not in names:
                    names.append(name)
            acc.setdefault(tuple(sorted(expo.items())), Fraction(0))
            acc[tuple(sorted(expo.items()))] += coeff
        if variables is None:
            variables = tuple(names)
        else:
            variables = tuple(variables) + tuple(n for n in names if n not in variables)
        terms = {}
        for expo, c in acc.items():
            d = dict(expo)
            e = tuple(d.get(v, 0) for v in variables)
            terms[e] = terms.get(e, Fraction(0)) + c
        return cls(variables, terms)


P = LaurentPolynomial.parse


def product(polys, variables=()):
    out = LaurentPolynomial.constant(1, variables)
    for p in polys:
        out = out * p
    return out


# --- serialization ---------------------------------------------------------

def _symbol_string(exps):
    parts = []
    for name, k in exps:
        parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def _parse_symbol_string(s):
    out = {}
    for factor in s.split("*"):
        m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", factor.strip())
        if not m:
            raise ValueError(f"bad symbol {s!r}")
        out[m.group(1)] = out.get(m.group(1), 0) + int(m.group(2) or 1)
    return out


def poly_to_json(p, chart_variables):
    """Encode as ``[{"exp": [...], "coeff": "p/q" | {"sym": ..., "scale": ...}}]``.

    One entry per term, in canonical order (chart exponent, then symbol part).
    """
    chart_variables = tuple(chart_variables)
    params = sorted(v for v in p.used_variables() if v not in chart_variables)
    q = p.with_variables(chart_variables + tuple(params))
    n = len(chart_variables)
    out = []
    for e, c in sorted(q.terms.items()):
        entry = {"exp": list(e[:n])}
        sym = [(params[i], k) for i, k in enumerate(e[n:]) if k]
        if sym:
            coeff = {"sym": _symbol_string(sym)}
            if c != 1:
                coeff["scale"] = format_fraction(c)
            entry["coeff"] = coeff
        else:
            entry["coeff"] = format_fraction(c)
        out.append(entry)
    return out


def poly_from_json(data, chart_variables, path="poly"):
    from .errors import SchemaError
    chart_variables = tuple(chart_variables)
    if not isinstance(data, list):
        raise SchemaError(path, "expected a list of terms")
    acc = LaurentPolynomial.constant(0, chart_variables)
    for i, term in enumerate(data):
        tp = f"{path}[{i}]"
        if not isinstance(term, dict) or "exp" not in term or "coeff" not in term:
            raise SchemaError(tp, "term needs 'exp' and 'coeff'")
        exp = term["exp"]
        if (not isinstance(exp, list) or len(exp) != len(chart_variables)
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in exp)):
            raise SchemaError(tp + ".exp", f"expected {len(chart_variables)} integers")
        coeff = term["coeff"]
        try:
            if isinstance(coeff, str):
                c = LaurentPolynomial.constant(Fraction(coeff), chart_variables)
            elif isinstance(coeff, dict) and isinstance(coeff.get("sym"), str):
                sym = _parse_symbol_string(coeff["sym"])
                scale = Fraction(coeff.get("scale", "1"))
                c = LaurentPolynomial.monomial(sym, scale)
            else:
                raise SchemaError(tp + ".coeff", "expected 'p/q' or {'sym': name}")
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(tp + ".coeff", str(exc)) from None
        mono = LaurentPolynomial(chart_variables, {tuple(exp): 1})
        acc = acc + c * mono
    return acc
