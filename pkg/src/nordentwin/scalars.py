"""Exact scalars: rationals and sparse multivariate polynomials over them.

Rationals are :class:`fractions.Fraction`. A :class:`Polynomial` keeps its
terms as a map from exponent vectors to nonzero coefficients, so two equal
polynomials always have identical term maps and zero-testing is an
emptiness check.
"""
from __future__ import annotations

import re
from math import gcd, lcm
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SpecParseError, StructuralError

Rational = Fraction

__all__ = [
    "Rational",
    "Polynomial",
    "as_rational",
    "scalar_arith",
    "scalar_substitute",
    "scalar_is_zero",
    "parse_polynomial",
]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating-point values are not accepted; use p/q strings")
    raise TypeError(f"cannot interpret {value!r} as a rational")


def _pad(exps: tuple, width: int) -> tuple:
    return exps + (0,) * (width - len(exps))


class Polynomial:
    """Immutable polynomial in an ordered list of named variables.

    A polynomial whose variable list is empty is a constant; constants are
    promoted to any other variable list when they meet one.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise StructuralError(f"duplicate variable names in {variables}")
        clean = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise StructuralError(
                    f"exponent vector {exps} does not match variables {variables}")
            if any(e < 0 for e in exps):
                raise StructuralError(f"negative exponent in {exps}")
            coef = as_rational(coef)
            if coef:
                clean[exps] = clean.get(exps, 0) + coef
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        # terms must already be canonical
        p = object.__new__(cls)
        object.__setattr__(p, "variables", variables)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value, variables: Iterable[str] = ()) -> "Polynomial":
        variables = tuple(variables)
        value = as_rational(value)
        if not value:
            return cls._raw(variables, {})
        return cls._raw(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Iterable[str]) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise StructuralError(f"unknown variable {name!r}; known: {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exps: Fraction(1)})

    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise StructuralError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def used_variables(self) -> tuple:
        used = set()
        for exps in self.terms:
            used.update(v for v, e in zip(self.variables, exps) if e)
        return tuple(v for v in self.variables if v in used)

    def with_variables(self, variables: Iterable[str]) -> "Polynomial":
        """Re-express over a variable list that contains every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        if not self.variables:
            return Polynomial._raw(variables, {_pad((), len(variables)): c
                                               for c in self.terms.values()})
        index = {}
        for v in self.used_variables():
            if v not in variables:
                raise StructuralError(f"variable {v!r} missing from {variables}")
            index[v] = variables.index(v)
        out = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                if e:
                    new[index[v]] = e
            out[tuple(new)] = c
        return Polynomial._raw(variables, out)

    def sorted_terms(self) -> list:
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def content(self) -> Fraction:
        """gcd of numerators over lcm of denominators (0 for the zero polynomial)."""
        if not self.terms:
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        d = 1
        for den in dens:
            d = lcm(d, den)
        return Fraction(g, d)

    def primitive(self) -> "Polynomial":
        """Scale by a rational so coefficients are coprime integers, leading one positive."""
        if not self.terms:
            return self
        c = self.content()
        lead = self.sorted_terms()[0][1]
        if lead < 0:
            c = -c
        return self * (1 / c)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    def _align(self, other: "Polynomial") -> tuple:
        if self.variables == other.variables:
            return self, other
        if not other.variables or not other.terms:
            return self, other.with_variables(self.variables)
        if not self.variables or not self.terms:
            return self.with_variables(other.variables), other
        raise StructuralError(
            f"variable lists differ: {self.variables} vs {other.variables}")

    def __add__(self, other):
        if type(other) is not Polynomial:
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        if not other.terms:
            if self.variables or not other.variables:
                return self
            return self.with_variables(other.variables)
        if not self.terms:
            if other.variables or not self.variables:
                return other
            return other.with_variables(self.variables)
        a, b = (self, other) if self.variables == other.variables else self._align(other)
        out = dict(a.terms)
        for exps, c in b.terms.items():
            s = out.get(exps)
            if s is None:
                out[exps] = c
            else:
                s = s + c
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        return Polynomial._raw(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if type(other) is not Polynomial:
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                if not other or not self.terms:
                    return Polynomial._raw(self.variables, {})
                return Polynomial._raw(self.variables,
                                       {e: c * other for e, c in self.terms.items()})
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        a, b = (self, other) if self.variables == other.variables else self._align(other)
        if not a.terms or not b.terms:
            return Polynomial._raw(a.variables, {})
        if len(b.terms) == 1:
            (eb, cb), = b.terms.items()
            if not any(eb):
                return Polynomial._raw(a.variables, {e: c * cb for e, c in a.terms.items()})
        if len(a.terms) == 1:
            (ea, ca), = a.terms.items()
            if not any(ea):
                return Polynomial._raw(a.variables, {e: ca * c for e, c in b.terms.items()})
        out = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._raw(a.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only division by a nonzero rational; polynomial division is a non-goal
        if isinstance(other, Polynomial):
            if not other.is_constant() or other.is_zero():
                return NotImplemented
            other = other.constant_value()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("polynomial divided by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise StructuralError("only non-negative integer powers are supported")
        result = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return not self.terms
            return bool(self.terms) and self.is_constant() and self.constant_value() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.variables == other.variables:
            return self.terms == other.terms
        try:
            a, b = self._align(other)
        except StructuralError:
            return self._named_terms() == other._named_terms()
        return a.terms == b.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def _named_terms(self) -> frozenset:
        return frozenset(
            (tuple((v, e) for v, e in zip(self.variables, exps) if e), c)
            for exps, c in self.terms.items())

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._named_terms()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- evaluation -------------------------------------------------------

    def substitute(self, assignment: Mapping[str, object]) -> Fraction:
        """Exact value under a full assignment of the used variables."""
        missing = [v for v in self.used_variables() if v not in assignment]
        if missing:
            raise StructuralError(f"no value assigned to {', '.join(missing)}")
        values = [as_rational(assignment[v]) if v in assignment else Fraction(0)
                  for v in self.variables]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for x, e in zip(values, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    def partial_substitute(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Substitute the assigned variables; the variable list is kept."""
        values = {v: as_rational(x) for v, x in assignment.items() if v in self.variables}
        if not values:
            return self
        out = {}
        for exps, c in self.terms.items():
            new = []
            for v, e in zip(self.variables, exps):
                if v in values:
                    c = c * values[v] ** e
                    new.append(0)
                else:
                    new.append(e)
            if c:
                key = tuple(new)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Polynomial._raw(self.variables, out)

    # -- text form --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, variables={self.variables})"


def scalar_arith(a: Polynomial, b: Polynomial | None, op: str) -> Polynomial:
    if op == "neg":
        return -a
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise StructuralError(f"unknown operation {op!r}")


def scalar_substitute(p: Polynomial, assignment: Mapping[str, object]) -> Fraction:
    return p.substitute(assignment)


def scalar_is_zero(p: Polynomial) -> bool:
    return p.is_zero()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    """Recursive-descent parser for ``coef*name^exp*... + ...`` with
    optional parentheses and unary minus."""

    def __init__(self, text: str, variables: tuple):
        self.text = text
        self.variables = variables
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.tokens.append(("num", int(m.group(1)), m.start(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) and not m.group(3).isspace():
                self.tokens.append(("op", m.group(3), m.start(3)))
        self.pos = 0

    def error(self, msg):
        at = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        raise SpecParseError(f"{msg} in polynomial {self.text!r}", column=at + 1)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None or (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            self.error(f"expected {value or kind}")
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("empty expression")
        p = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.pos += 1
            q = self.term()
            p = p + q if tok[1] == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.pos += 1
            if tok[1] == "*":
                p = p * self.unary()
            else:
                q = self.unary()
                if not q.is_constant() or q.is_zero():
                    self.error("division only by a nonzero rational constant")
                p = p / q.constant_value()
        return p

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.pos += 1
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self):
        p = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.pos += 1
            e = self.take("num")[1]
            p = p ** e
        return p

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end")
        if tok[0] == "num":
            self.pos += 1
            return Polynomial.constant(tok[1], self.variables)
        if tok[0] == "name":
            self.pos += 1
            if tok[1] not in self.variables:
                self.error(f"unknown parameter {tok[1]!r}")
            return Polynomial.variable(tok[1], self.variables)
        if tok[1] == "(":
            self.pos += 1
            p = self.expr()
            self.take("op", ")")
            return p
        self.error(f"unexpected {tok[1]!r}")


def parse_polynomial(text: str, variables: Iterable[str] = ()) -> Polynomial:
    """Parse the text form produced by ``str(Polynomial)``."""
    return _Parser(str(text), tuple(variables)).parse()
