"""High-precision complex scalars, case constants and the scalar expression language.

Scalars are ``gmpy2.mpc`` values.  gmpy2 rounds every operation to the
precision of the *active* context, so every public entry point that does
arithmetic runs inside ``ctx.workspace()``.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Iterator, Mapping, Union

import gmpy2
from gmpy2 import mpc, mpfr

Scalar = mpc
Number = Union[int, float, complex, mpfr, mpc]

MIN_PRECISION = 30
FAST_PRECISION = 16
FAST_TOL = 1e-9
GUARD_DIGITS = 10


class ConfigError(ValueError):
    """Invalid precision/tolerance configuration."""


class ScalarParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ScalarDomainError(ValueError):
    """sqrt of a negative (or non-real) subexpression."""


class Case(str, Enum):
    SQRT13 = "sqrt13"
    SQRT17 = "sqrt17"

    @property
    def symbol(self) -> str:
        return "lambda" if self is Case.SQRT13 else "beta"

    @property
    def discriminant(self) -> int:
        return 13 if self is Case.SQRT13 else 17


def _bits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10))) + 16


@dataclass(frozen=True)
class FieldContext:
    case: Case
    precision: int
    tol: float
    constants: Mapping[str, mpc] = field(default_factory=dict, compare=False)

    @property
    def bits(self) -> int:
        return _bits(self.precision)

    @property
    def generator(self) -> mpc:
        return self.constants["generator"]

    @property
    def fast(self) -> bool:
        return self.precision <= FAST_PRECISION

    @contextmanager
    def workspace(self) -> Iterator[None]:
        with gmpy2.context(precision=self.bits):
            yield

    def scalar(self, value: Number) -> mpc:
        with self.workspace():
            return mpc(value)

    def zero(self) -> mpc:
        return self.scalar(0)

    def one(self) -> mpc:
        return self.scalar(1)

    def close(self, x: Number, y: Number, tol: float | None = None) -> bool:
        with self.workspace():
            return abs(mpc(x) - mpc(y)) < (self.tol if tol is None else tol)


def make_context(case: Case | str, precision: int = 60, tol: float | None = None) -> FieldContext:
    """Build a context; ``tol`` defaults to 10^-(precision-20), i.e. 1e-40 at 60 digits."""
    case = Case(case)
    if precision < MIN_PRECISION:
        raise ConfigError(f"precision {precision} below minimum {MIN_PRECISION}; use fast_context()")
    if tol is None:
        tol = 10.0 ** (-(precision - 20))
    if tol < 10.0 ** (-(precision - GUARD_DIGITS)):
        raise ConfigError(f"tol {tol:g} leaves fewer than {GUARD_DIGITS} guard digits at precision {precision}")
    return _build(case, precision, tol)


def fast_context(case: Case | str, tol: float = FAST_TOL) -> FieldContext:
    """Double-precision development mode (16 digits, tol 1e-9)."""
    return _build(Case(case), FAST_PRECISION, tol)


def _build(case: Case, precision: int, tol: float) -> FieldContext:
    with gmpy2.context(precision=_bits(precision)):
        d = case.discriminant
        g2 = (5 + gmpy2.sqrt(mpfr(d))) / 2
        g = gmpy2.sqrt(g2)
        consts = {"generator": mpc(g)}
        if case is Case.SQRT13:
            rho = mpc(-gmpy2.sqrt(g2 - 4), gmpy2.sqrt(8 - g2)) / 2
            tau = mpc(-gmpy2.sqrt(g2 - 1), -gmpy2.sqrt(5 - g2)) / 2
            consts["rho"] = rho
            consts["tau"] = tau
    return FieldContext(case, precision, tol, MappingProxyType(consts))


def defining_residual(ctx: FieldContext) -> mpfr:
    """|x^4 - 5x^2 + c| for the generator (c = 3 for sqrt13, 2 for sqrt17)."""
    c = 3 if ctx.case is Case.SQRT13 else 2
    with ctx.workspace():
        x = ctx.generator
        return abs(x ** 4 - 5 * x ** 2 + c)


# -- expression language -----------------------------------------------------

_KEYWORDS = ("lambda", "beta", "sqrt", "i")


class _Parser:
    def __init__(self, text: str, ctx: FieldContext):
        self.text = text
        self.ctx = ctx
        self.tokens = list(self._tokenize(text))
        self.k = 0

    def _tokenize(self, s: str):
        n = len(s)
        j = 0
        while j < n:
            ch = s[j]
            if ch.isspace():
                j += 1
            elif ch.isdigit() or (ch == "." and j + 1 < n and s[j + 1].isdigit()):
                start = j
                while j < n and s[j].isdigit():
                    j += 1
                if j < n and s[j] == ".":
                    j += 1
                    while j < n and s[j].isdigit():
                        j += 1
                if j < n and s[j] in "eE":
                    m = j + 1
                    if m < n and s[m] in "+-":
                        m += 1
                    if m < n and s[m].isdigit():
                        j = m
                        while j < n and s[j].isdigit():
                            j += 1
                yield ("num", s[start:j], start)
            elif ch.isalpha():
                start = j
                while j < n and s[j].isalpha():
                    j += 1
                word = s[start:j]
                if word not in _KEYWORDS:
                    raise ScalarParseError(f"unknown identifier {word!r}", start)
                yield ("name", word, start)
            elif ch in "+-*/^()":
                yield ("op", ch, j)
                j += 1
            else:
                raise ScalarParseError(f"unexpected character {ch!r}", j)
        yield ("end", "", n)

    def peek(self):
        return self.tokens[self.k]

    def take(self, kind: str, value: str | None = None):
        tok = self.tokens[self.k]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ScalarParseError(f"expected {want!r}, got {got!r}", tok[2])
        self.k += 1
        return tok

    def parse(self) -> mpc:
        value = self.expr()
        self.take("end")
        return value

    def expr(self) -> mpc:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take("op")[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> mpc:
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take("op")
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise ScalarDomainError(f"division by zero at position {pos}")
                value = value / rhs
        return value

    def factor(self) -> mpc:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            # unary minus binds looser than '^': -x^2 == -(x^2)
            self.take("op")
            return -self.factor()
        value = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take("op")
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take("op")
                sign = -1
            num = self.take("num")
            if not num[1].isdigit():
                raise ScalarParseError("exponent must be an integer", num[2])
            value = value ** (sign * int(num[1]))
        return value

    def atom(self) -> mpc:
        tok = self.peek()
        kind, val, pos = tok
        if kind == "num":
            self.take("num")
            return mpc(mpfr(val))
        if kind == "name":
            self.take("name")
            if val == "i":
                return mpc(0, 1)
            if val in ("lambda", "beta"):
                if val != self.ctx.case.symbol:
                    raise ScalarParseError(f"{val!r} is not legal in {self.ctx.case.value} data", pos)
                return self.ctx.generator
            self.take("op", "(")
            arg = self.expr()
            self.take("op", ")")
            return _real_sqrt(arg, self.ctx.tol, pos)
        if kind == "op" and val == "(":
            self.take("op")
            value = self.expr()
            self.take("op", ")")
            return value
        raise ScalarParseError(f"unexpected {val or 'end of input'!r}", pos)


def _real_sqrt(x: mpc, tol: float, pos: int = -1) -> mpc:
    if abs(x.imag) > tol:
        raise ScalarDomainError(f"sqrt of non-real value at position {pos}; write imaginary parts with i")
    if x.real < -tol:
        raise ScalarDomainError(f"sqrt of negative value {float(x.real):.6g} at position {pos}")
    re = x.real if x.real > 0 else mpfr(0)
    return mpc(gmpy2.sqrt(re))


def parse_scalar(text: str, ctx: FieldContext) -> mpc:
    with ctx.workspace():
        return _Parser(str(text), ctx).parse()


def _decimal(x: mpfr, digits: int) -> str:
    mant, exp, _ = gmpy2.digits(x, 10, digits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1}"


def format_scalar(z: Number, ctx: FieldContext, digits: int | None = None) -> str:
    """Render a scalar as an expression that parses back to the same value."""
    digits = ctx.precision + 5 if digits is None else digits
    with ctx.workspace():
        z = mpc(z)
        re, im = z.real, z.imag
        re_s = _decimal(re, digits) if re != 0 else "0"
        if im == 0:
            return re_s
        im_s = _decimal(abs(im), digits)
        sign = "-" if im < 0 else "+"
        if re == 0:
            return f"{'-' if im < 0 else ''}{im_s}*i"
        return f"{re_s}{sign}{im_s}*i"


def sqrt(x: Number, ctx: FieldContext) -> mpc:
    """Principal square root of a non-negative real scalar."""
    with ctx.workspace():
        return _real_sqrt(mpc(x), ctx.tol)
