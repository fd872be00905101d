"""Exact scalar expressions: fractions of polynomial-exponential sums.

A term is ``coefficient * prod(x_i ** p_i) * exp(sum(a_i * x_i))`` with a
rational coefficient, natural powers and rational exponential multipliers.
An ``Expr`` wraps a sympy value in a canonical fraction of two term sums.
Each coordinate carrying exponentials gets a positive generator
``exp(x / L)``, so the fraction cancels as a plain polynomial fraction and
an expression is zero exactly when its numerator has no terms.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple, Union

import sympy
from sympy.polys.polyerrors import CoercionFailed, PolynomialError

from domain.errors import (
    EvaluationError,
    ManifoldDefinitionError,
    NonConstantError,
    SymbolicZeroDivisionError,
)

ExpAtom = Tuple[Tuple[str, Fraction], ...]
Monomial = Tuple[Tuple[str, int], ...]
Key = Tuple[ExpAtom, Monomial]
Terms = Tuple[Tuple[Key, Fraction], ...]

ONE_KEY: Key = ((), ())

_IDENTIFIER = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_RESERVED = frozenset({"exp"})

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Coordinate:
    """A coordinate symbol of a chart."""

    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENTIFIER.match(self.name):
            raise ManifoldDefinitionError(f"Invalid coordinate name: {self.name!r}")
        if self.name in _RESERVED:
            raise ManifoldDefinitionError(f"Reserved coordinate name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


def _name_of(symbol: Union[str, Coordinate]) -> str:
    return symbol.name if isinstance(symbol, Coordinate) else symbol


@lru_cache(maxsize=None)
def coordinate_symbol(name: str) -> sympy.Symbol:
    """The sympy symbol standing for coordinate ``name``."""
    return sympy.Symbol(name, real=True)


@lru_cache(maxsize=None)
def _exp_generator(name: str) -> sympy.Symbol:
    # leading underscore keeps it out of the coordinate namespace
    return sympy.Symbol(f"_exp_{name}", positive=True)


def _to_rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


# ---------------------------------------------------------------------------
# key algebra
# ---------------------------------------------------------------------------


def _merge(a: tuple, b: tuple, sign: int = 1) -> tuple:
    """Add (or subtract) two sparse vectors stored as sorted (name, value) pairs."""
    merged = dict(a)
    for name, value in b:
        merged[name] = merged.get(name, 0) + sign * value
    return tuple(sorted((n, v) for n, v in merged.items() if v != 0))


def _compare_sparse(a: tuple, b: tuple) -> int:
    da, db = dict(a), dict(b)
    for name in sorted(set(da) | set(db)):
        va, vb = da.get(name, 0), db.get(name, 0)
        if va != vb:
            return -1 if va < vb else 1
    return 0


def _compare_keys(a: Key, b: Key) -> int:
    # Lexicographic on dense vectors, so the order survives common shifts.
    return _compare_sparse(a[0], b[0]) or _compare_sparse(a[1], b[1])


_ORDER = cmp_to_key(_compare_keys)


def _freeze(terms: Mapping[Key, Fraction]) -> Terms:
    return tuple(
        sorted(
            ((k, c) for k, c in terms.items() if c != 0),
            key=lambda item: _ORDER(item[0]),
            reverse=True,
        )
    )


_ONE_TERMS: Terms = ((ONE_KEY, Fraction(1)),)


# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------


def _sympy_term(key: Key, coef: Fraction) -> sympy.Expr:
    exp_atom, mono = key
    factors = [_to_rational(coef)]
    factors.extend(coordinate_symbol(name) ** power for name, power in mono)
    if exp_atom:
        factors.append(
            sympy.exp(sympy.Add(*(_to_rational(r) * coordinate_symbol(n) for n, r in exp_atom)))
        )
    return sympy.Mul(*factors)


def _sympy_sum(terms: Terms) -> sympy.Expr:
    return sympy.Add(*(_sympy_term(key, coef) for key, coef in terms))


def _exp_rates(atom: sympy.exp) -> Dict[str, Fraction]:
    argument = sympy.expand(atom.args[0])
    rates: Dict[str, Fraction] = {}
    for factor, coef in argument.as_coefficients_dict().items():
        if not (isinstance(factor, sympy.Symbol) and coef.is_Rational):
            raise ManifoldDefinitionError(
                f"Exponential argument is not linear in the coordinates: {argument}"
            )
        rates[factor.name] = _to_fraction(coef)
    return rates


def _poly_terms(
    part: sympy.Expr,
    coordinates: Tuple[str, ...],
    exponentials: Tuple[str, ...],
    scale: Mapping[str, int],
) -> Dict[Key, Fraction]:
    generators = [coordinate_symbol(n) for n in coordinates] + [_exp_generator(n) for n in exponentials]
    if not generators:
        if not part.is_Rational:
            raise ManifoldDefinitionError(f"Not a rational constant: {part}")
        value = _to_fraction(part)
        return {ONE_KEY: value} if value else {}
    try:
        poly = sympy.Poly(part, *generators, domain=sympy.QQ)
    except (PolynomialError, CoercionFailed) as e:
        raise ManifoldDefinitionError(f"Not an exponential-polynomial expression: {part}") from e
    split = len(coordinates)
    terms: Dict[Key, Fraction] = {}
    for powers, coef in poly.as_dict(native=False).items():
        mono = tuple((n, p) for n, p in zip(coordinates, powers[:split]) if p)
        atom = tuple(
            (n, Fraction(p, scale[n])) for n, p in zip(exponentials, powers[split:]) if p
        )
        terms[(atom, mono)] = _to_fraction(coef)
    return terms


@lru_cache(maxsize=65536)
def _canonical(value: sympy.Expr) -> Tuple[Terms, Terms]:
    """Canonical (numerator, denominator) terms of an exponential-polynomial fraction."""
    atoms = {atom: _exp_rates(atom) for atom in value.atoms(sympy.exp)}
    scale: Dict[str, int] = {}
    for rates in atoms.values():
        for name, rate in rates.items():
            scale[name] = math.lcm(scale.get(name, 1), rate.denominator)
    substituted = value.xreplace(
        {
            atom: sympy.Mul(
                *(_exp_generator(n) ** int(r * scale[n]) for n, r in rates.items())
            )
            for atom, rates in atoms.items()
        }
    )
    num, den = sympy.fraction(sympy.cancel(substituted))
    if den == 0:
        raise SymbolicZeroDivisionError("Division by the zero expression")
    if num == 0:
        return (), _ONE_TERMS

    symbols = num.free_symbols | den.free_symbols
    coordinates = tuple(sorted(s.name for s in symbols if not s.name.startswith("_")))
    exponentials = tuple(sorted(scale))
    num_terms = _poly_terms(num, coordinates, exponentials, scale)
    den_terms = _poly_terms(den, coordinates, exponentials, scale)

    # exponential atoms are units: shift so the leading denominator atom is 1
    lead_exp = max(den_terms, key=_ORDER)[0]
    num_terms = {(_merge(e, lead_exp, sign=-1), m): c for (e, m), c in num_terms.items()}
    den_terms = {(_merge(e, lead_exp, sign=-1), m): c for (e, m), c in den_terms.items()}
    lead = den_terms[max(den_terms, key=_ORDER)]
    return (
        _freeze({k: c / lead for k, c in num_terms.items()}),
        _freeze({k: c / lead for k, c in den_terms.items()}),
    )


# ---------------------------------------------------------------------------
# Expr
# ---------------------------------------------------------------------------


class Expr:
    """Immutable exact scalar field element in canonical fraction form."""

    __slots__ = ("_num", "_den", "_value")
    __hash__ = None  # equality compares canonical forms

    def __init__(
        self,
        numerator: Mapping[Key, Scalar] = None,
        denominator: Mapping[Key, Scalar] = None,
    ):
        if denominator is None:
            denominator = {ONE_KEY: 1}
        num = _freeze({k: Fraction(c) for k, c in (numerator or {}).items()})
        den = _freeze({k: Fraction(c) for k, c in denominator.items()})
        if not den:
            raise SymbolicZeroDivisionError("Division by the zero expression")
        value = _sympy_sum(num) / _sympy_sum(den)
        num, den = _canonical(value)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_value", None)

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    @classmethod
    def _raw(cls, num: Terms, den: Terms) -> "Expr":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_num", num)
        object.__setattr__(obj, "_den", den)
        object.__setattr__(obj, "_value", None)
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "Expr":
        return cls._raw((), _ONE_TERMS)

    @classmethod
    def one(cls) -> "Expr":
        return cls._raw(_ONE_TERMS, _ONE_TERMS)

    @classmethod
    def constant(cls, value: Scalar) -> "Expr":
        value = Fraction(value)
        if value == 0:
            return cls.zero()
        return cls._raw(((ONE_KEY, value),), _ONE_TERMS)

    @classmethod
    def symbol(cls, name: Union[str, Coordinate]) -> "Expr":
        key: Key = ((), ((Coordinate(_name_of(name)).name, 1),))
        return cls._raw(((key, Fraction(1)),), _ONE_TERMS)

    @classmethod
    def exponential(cls, rates: Mapping[Union[str, Coordinate], Scalar]) -> "Expr":
        """``exp(sum(rate * coordinate))`` for rational rates."""
        atom = tuple(
            sorted(
                (Coordinate(_name_of(n)).name, Fraction(r))
                for n, r in rates.items()
                if Fraction(r) != 0
            )
        )
        return cls._raw((((atom, ()), Fraction(1)),), _ONE_TERMS)

    @classmethod
    def from_sympy(cls, value) -> "Expr":
        """Canonical ``Expr`` of a sympy exponential-polynomial fraction.

        Raises:
            ManifoldDefinitionError: non-linear exponent or a function other than exp
            SymbolicZeroDivisionError: the value divides by zero
        """
        value = sympy.sympify(value)
        renamed = {s: coordinate_symbol(s.name) for s in value.free_symbols if s != coordinate_symbol(s.name)}
        if renamed:
            value = value.xreplace(renamed)
        if value.has(sympy.zoo, sympy.nan, sympy.oo):
            raise SymbolicZeroDivisionError("Division by the zero expression")
        num, den = _canonical(value)
        return cls._raw(num, den)

    @staticmethod
    def coerce(value) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return Expr.constant(value)
        raise TypeError(f"Cannot convert {type(value).__name__} to Expr")

    # structure ------------------------------------------------------------

    @property
    def numerator(self) -> Terms:
        return self._num

    @property
    def denominator(self) -> Terms:
        return self._den

    def to_sympy(self) -> sympy.Expr:
        if self._value is None:
            value = _sympy_sum(self._num)
            if not self._den_is_one():
                value = value / _sympy_sum(self._den)
            object.__setattr__(self, "_value", value)
        return self._value

    def _den_is_one(self) -> bool:
        return self._den == _ONE_TERMS

    def is_zero(self) -> bool:
        return not self._num

    def is_constant(self) -> bool:
        return self._den_is_one() and all(k == ONE_KEY for k, _ in self._num)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise NonConstantError(f"Expression is not constant: {self}")
        return self._num[0][1] if self._num else Fraction(0)

    def free_symbols(self) -> FrozenSet[str]:
        names = set()
        for (exp_atom, mono), _ in self._num + self._den:
            names.update(n for n, _ in exp_atom)
            names.update(n for n, _ in mono)
        return frozenset(names)

    def same_form(self, other: "Expr") -> bool:
        """Structural equality of canonical forms."""
        return self._num == other._num and self._den == other._den

    # arithmetic -----------------------------------------------------------

    def _scaled(self, factor: Fraction) -> "Expr":
        if factor == 0 or self.is_zero():
            return Expr.zero()
        return Expr._raw(tuple((k, c * factor) for k, c in self._num), self._den)

    def __neg__(self) -> "Expr":
        return self._scaled(Fraction(-1))

    def __add__(self, other) -> "Expr":
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.is_constant() and other.is_constant():
            return Expr.constant(self.constant_value() + other.constant_value())
        return Expr.from_sympy(self.to_sympy() + other.to_sympy())

    __radd__ = __add__

    def __sub__(self, other) -> "Expr":
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        return Expr.coerce(other) - self

    def __mul__(self, other) -> "Expr":
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Expr.zero()
        if other.is_constant():
            return self._scaled(other.constant_value())
        if self.is_constant():
            return other._scaled(self.constant_value())
        return Expr.from_sympy(self.to_sympy() * other.to_sympy())

    __rmul__ = __mul__

    def reciprocal(self) -> "Expr":
        if self.is_zero():
            raise SymbolicZeroDivisionError("Division by the zero expression")
        if self.is_constant():
            return Expr.constant(1 / self.constant_value())
        return Expr.from_sympy(1 / self.to_sympy())

    def __truediv__(self, other) -> "Expr":
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise SymbolicZeroDivisionError("Division by the zero expression")
        if other.is_constant():
            return self._scaled(1 / other.constant_value())
        return Expr.from_sympy(self.to_sympy() / other.to_sympy())

    def __rtruediv__(self, other) -> "Expr":
        return Expr.coerce(other) / self

    def __pow__(self, exponent: int) -> "Expr":
        if isinstance(exponent, bool) or not isinstance(exponent, int):
            raise TypeError("Only integer powers are supported")
        if exponent == 0:
            return Expr.one()
        if self.is_zero():
            if exponent < 0:
                raise SymbolicZeroDivisionError("Division by the zero expression")
            return Expr.zero()
        if self.is_constant():
            return Expr.constant(self.constant_value() ** exponent)
        return Expr.from_sympy(self.to_sympy() ** exponent)

    def __eq__(self, other) -> bool:
        try:
            other = Expr.coerce(other)
        except TypeError:
            return NotImplemented
        return self.same_form(other)

    # calculus -------------------------------------------------------------

    def differentiate(self, symbol: Union[str, Coordinate]) -> "Expr":
        name = _name_of(symbol)
        if name not in self.free_symbols():
            return Expr.zero()
        return Expr.from_sympy(sympy.diff(self.to_sympy(), coordinate_symbol(name)))

    # evaluation -----------------------------------------------------------

    @staticmethod
    def _evaluate_terms(terms: Terms, point: Mapping[str, float]) -> float:
        total = []
        for (exp_atom, mono), coef in terms:
            try:
                value = float(coef)
                for name, power in mono:
                    value *= point[name] ** power
                if exp_atom:
                    value *= math.exp(math.fsum(float(r) * point[name] for name, r in exp_atom))
            except KeyError as e:
                raise EvaluationError(f"Unassigned coordinate: {e.args[0]}") from None
            total.append(value)
        return math.fsum(total)

    def evaluate(self, point: Mapping[Union[str, Coordinate], float]) -> float:
        point = {_name_of(k): float(v) for k, v in point.items()}
        numerator = self._evaluate_terms(self._num, point)
        denominator = self._evaluate_terms(self._den, point)
        if denominator == 0.0:
            raise EvaluationError(f"Denominator vanishes at {point}")
        return numerator / denominator

    def evaluate_rational(self, point: Mapping[Union[str, Coordinate], Scalar]) -> Fraction:
        """Exact value at a rational point; exponentials must reduce to exp(0)."""
        point = {_name_of(k): Fraction(v) for k, v in point.items()}

        def exact(terms: Terms) -> Fraction:
            total = Fraction(0)
            for (exp_atom, mono), coef in terms:
                try:
                    if sum((r * point[n] for n, r in exp_atom), Fraction(0)) != 0:
                        raise EvaluationError("Exponential is irrational at this point")
                    value = coef
                    for name, power in mono:
                        value *= point[name] ** power
                except KeyError as e:
                    raise EvaluationError(f"Unassigned coordinate: {e.args[0]}") from None
                total += value
            return total

        denominator = exact(self._den)
        if denominator == 0:
            raise EvaluationError(f"Denominator vanishes at {point}")
        return exact(self._num) / denominator

    # printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._num:
            return "0"
        numerator = _format_sum(self._num)
        if self._den_is_one():
            return numerator
        return f"({numerator})/({_format_sum(self._den)})"

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"


def _format_coefficient(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _format_linear(atom: ExpAtom) -> str:
    parts = []
    for name, rate in atom:
        if rate == 1:
            text = name
        elif rate == -1:
            text = f"-{name}"
        else:
            text = f"{_format_coefficient(rate)}*{name}"
        parts.append(text)
    return _join_signed(parts)


def _join_signed(parts: Iterable[str]) -> str:
    out = ""
    for part in parts:
        if not out:
            out = part
        elif part.startswith("-"):
            out += f" - {part[1:]}"
        else:
            out += f" + {part}"
    return out


def _format_term(key: Key, coef: Fraction) -> str:
    exp_atom, mono = key
    factors = [name if power == 1 else f"{name}^{power}" for name, power in mono]
    if exp_atom:
        factors.append(f"exp({_format_linear(exp_atom)})")
    if not factors:
        return _format_coefficient(coef)
    body = "*".join(factors)
    if coef == 1:
        return body
    if coef == -1:
        return f"-{body}"
    return f"{_format_coefficient(coef)}*{body}"


def _format_sum(terms: Terms) -> str:
    return _join_signed(_format_term(k, c) for k, c in terms)


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------


class ArithmeticOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    NEG = "neg"
    INT_POW = "int_pow"


def arithmetic(a: Expr, b, op: ArithmeticOp) -> Expr:
    """Apply ``op``; ``b`` is ignored for NEG and is an int for INT_POW."""
    if op is ArithmeticOp.NEG:
        return -a
    if op is ArithmeticOp.INT_POW:
        return a ** b
    b = Expr.coerce(b)
    if op is ArithmeticOp.ADD:
        return a + b
    if op is ArithmeticOp.SUB:
        return a - b
    if op is ArithmeticOp.MUL:
        return a * b
    return a / b


def differentiate(f: Expr, v: Union[str, Coordinate]) -> Expr:
    return f.differentiate(v)


def is_zero(f: Expr) -> bool:
    return f.is_zero()


def evaluate(f: Expr, point: Mapping[Union[str, Coordinate], float]) -> float:
    return f.evaluate(point)


def normalize(f: Expr) -> Expr:
    """Re-run canonicalization (idempotent on constructed values)."""
    return Expr.from_sympy(f.to_sympy())


ZERO = Expr.zero()
ONE = Expr.one()
