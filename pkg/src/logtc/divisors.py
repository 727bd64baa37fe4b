"""Formal divisor classes on strata."""

from __future__ import annotations

from fractions import Fraction

from .polynomial import format_fraction


class DivisorClass:
    """Formal Q-combination of named divisors (or line-bundle symbols) on a stratum.

    Multiplicities are rationals because Weil divisors on singular toric
    components restrict to walls with fractional intersection numbers; every
    class produced for a wall bundle is checked to have integral degree.
    """

    __slots__ = ("stratum", "entries")

    def __init__(self, stratum, entries=None):
        self.stratum = stratum
        clean = {}
        for name, mult in (entries or {}).items():
            mult = Fraction(mult)
            if mult:
                clean[name] = clean.get(name, Fraction(0)) + mult
                if not clean[name]:
                    del clean[name]
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def of(cls, stratum, *names):
        out = {}
        for n in names:
            out[n] = out.get(n, 0) + 1
        return cls(stratum, out)

    def _check(self, other):
        if other.stratum != self.stratum:
            raise ValueError(f"classes live on {self.stratum} and {other.stratum}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for n, m in other.entries.items():
            out[n] = out.get(n, 0) + m
        return DivisorClass(self.stratum, out)

    def __neg__(self):
        return DivisorClass(self.stratum, {n: -m for n, m in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return DivisorClass(self.stratum, {n: m * Fraction(k) for n, m in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, DivisorClass) and self.stratum == other.stratum
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.stratum, tuple(self.entries.items())))

    def is_zero(self):
        return not self.entries

    def is_effective(self):
        return all(m > 0 for m in self.entries.values())

    def le(self, other):
        """``self <= other`` coefficientwise."""
        names = set(self.entries) | set(other.entries)
        return all(self.entries.get(n, 0) <= other.entries.get(n, 0) for n in names)

    def support(self):
        return sorted(self.entries)

    def mult(self, name):
        return self.entries.get(name, Fraction(0))

    def degree(self, weights):
        """Sum of multiplicity times ``weights[name]``; None if a weight is unknown."""
        total = Fraction(0)
        for n, m in self.entries.items():
            if n not in weights:
                return None
            total += m * Fraction(weights[n])
        return total

    def without(self, names):
        return DivisorClass(self.stratum, {n: m for n, m in self.entries.items() if n not in set(names)})

    def rename(self, fn):
        out = {}
        for n, m in self.entries.items():
            out[fn(n)] = out.get(fn(n), 0) + m
        return DivisorClass(self.stratum, out)

    def to_json(self):
        return {"stratum": self.stratum,
                "entries": [{"name": n, "mult": format_fraction(m)} for n, m in self.entries.items()]}

    def __str__(self):
        if not self.entries:
            return "0"
        parts = []
        for n, m in sorted(self.entries.items(), key=lambda nm: (nm[1] < 0, nm[0])):
            n = _wrap(n)
            if m == 1:
                parts.append(f"+ {n}")
            elif m == -1:
                parts.append(f"- {n}")
            elif m > 0:
                parts.append(f"+ {format_fraction(m)}*{n}")
            else:
                parts.append(f"- {format_fraction(-m)}*{n}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"DivisorClass({self.stratum!r}, {str(self)!r})"


def _wrap(name):
    """Parenthesize names with a top-level space, e.g. polynomial factor names."""
    depth = 0
    for ch in name:
        depth += (ch in "([") - (ch in ")]")
        if ch == " " and depth == 0:
            return f"({name})"
    return name
