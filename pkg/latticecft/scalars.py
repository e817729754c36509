from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Optional, Sequence

import sympy
from sympy import QQ, Rational, sqrt, sympify
from sympy.ntheory.factor_ import core
from sympy.polys.domains import RealField
from sympy.polys.polyerrors import CoercionFailed, IsomorphismFailed, NotAlgebraic

from latticecft.errors import BackendMismatch, ConfigError

logger = logging.getLogger(__name__)

# Domain elements of the active sympy domain (PythonMPQ, ANP or RealElement).
Scalar = Any

BACKEND_KINDS = ("rational", "quadratic", "float")

_SQRT_SHORTHAND = re.compile(r"sqrt(\d+)")


@dataclass(frozen=True)
class ScalarBackend:
    kind: str = "rational"  # rational | quadratic | float
    radicand: int = 1
    tolerance: float = 1e-12
    precision: int = 53

    def __post_init__(self) -> None:
        if self.kind not in BACKEND_KINDS:
            raise ConfigError(f"Unknown scalar backend '{self.kind}' (expected one of {', '.join(BACKEND_KINDS)}).")
        if self.kind == "quadratic":
            d = int(self.radicand)
            if d < 2 or int(core(d)) != d:
                raise ConfigError(f"quadratic backend needs a square-free radicand >= 2, got {self.radicand}")
        if self.kind == "float" and not (0.0 < float(self.tolerance) < 1.0):
            raise ConfigError(f"float backend tolerance must lie in (0, 1), got {self.tolerance}")

    @property
    def name(self) -> str:
        if self.kind == "quadratic":
            return f"quadratic({self.radicand})"
        if self.kind == "float":
            return f"float({self.tolerance:g})"
        return "rational"

    @property
    def is_exact(self) -> bool:
        return self.kind != "float"

    @cached_property
    def domain(self) -> Any:
        if self.kind == "quadratic":
            return QQ.algebraic_field(sqrt(int(self.radicand)))
        if self.kind == "float":
            return RealField(prec=int(self.precision))
        return QQ

    @cached_property
    def zero(self) -> Scalar:
        return self.domain.zero

    @cached_property
    def one(self) -> Scalar:
        return self.domain.one

    @cached_property
    def half(self) -> Scalar:
        return self.from_rational(Fraction(1, 2))

    def from_int(self, n: int) -> Scalar:
        return self.domain.convert(int(n))

    def from_rational(self, value: Fraction) -> Scalar:
        return self.domain.from_sympy(Rational(value.numerator, value.denominator))

    def from_sympy(self, expr: Any) -> Scalar:
        expr = sympify(expr)
        if self.is_exact and expr.has(sympy.Float):
            raise BackendMismatch(f"float value {expr} cannot enter the exact backend {self.name}")
        try:
            return self.domain.from_sympy(expr)
        except (CoercionFailed, IsomorphismFailed, NotAlgebraic, TypeError, ValueError) as exc:
            raise BackendMismatch(f"{expr} is not representable in backend {self.name}") from exc

    def convert(self, value: Any, *, r_squared: Any = None) -> Scalar:
        if isinstance(value, str):
            return self.from_sympy(parse_token(value, r_squared=r_squared))
        if isinstance(value, bool):
            raise BackendMismatch("booleans are not scalars")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_rational(value)
        if isinstance(value, float):
            if self.is_exact:
                raise BackendMismatch(f"float value {value!r} cannot enter the exact backend {self.name}")
            return self.domain.convert(value)
        if isinstance(value, sympy.Basic):
            return self.from_sympy(value)
        if self.domain.of_type(value):
            return value
        raise BackendMismatch(f"cannot convert {value!r} into backend {self.name}")

    def to_sympy(self, x: Scalar) -> Any:
        return self.domain.to_sympy(x)

    def to_float(self, x: Scalar) -> float:
        return float(self.domain.to_sympy(x))

    def to_str(self, x: Scalar) -> str:
        if self.is_exact:
            return str(self.domain.to_sympy(x))
        return f"{self.to_float(x):.15g}"

    def key(self, x: Scalar) -> Any:
        """Hashable canonical form, used for table keys and duplicate detection."""
        if self.is_exact:
            return self.domain.to_sympy(x)
        digits = max(0, int(-math.log10(float(self.tolerance))) - 3)
        value = round(self.to_float(x), digits)
        return 0.0 if value == 0 else value

    def is_zero(self, x: Scalar) -> bool:
        if self.is_exact:
            return not x
        return abs(self.to_float(x)) <= float(self.tolerance)

    def eq(self, a: Scalar, b: Scalar) -> bool:
        if self.is_exact:
            return a == b
        fa = self.to_float(a)
        fb = self.to_float(b)
        scale = max(1.0, abs(fa), abs(fb))
        return abs(fa - fb) <= float(self.tolerance) * scale

    def as_integer(self, x: Scalar) -> Optional[int]:
        if self.is_exact:
            s = self.domain.to_sympy(x)
            return int(s) if s.is_Integer else None
        f = self.to_float(x)
        r = int(round(f))
        if abs(f - r) <= float(self.tolerance) * max(1.0, abs(f)):
            return r
        return None

    def as_rational(self, x: Scalar) -> Optional[Fraction]:
        if not self.is_exact:
            return None
        s = self.domain.to_sympy(x)
        if not s.is_Rational:
            return None
        return Fraction(int(s.p), int(s.q))

    def rational_components(self, x: Scalar) -> tuple[Fraction, Fraction]:
        """Split an exact scalar as a + b*sqrt(d) with rational a, b."""
        if not self.is_exact:
            raise BackendMismatch("rational components need an exact backend")
        s = sympy.expand(self.domain.to_sympy(x))
        if self.kind == "rational":
            return Fraction(int(s.p), int(s.q)), Fraction(0)
        root = sqrt(int(self.radicand))
        b = s.coeff(root)
        a = sympy.expand(s - b * root)
        if not (a.is_Rational and b.is_Rational):
            raise BackendMismatch(f"{s} does not split over QQ(sqrt({self.radicand}))")
        return Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))

    def from_components(self, a: Fraction, b: Fraction) -> Scalar:
        expr = Rational(a.numerator, a.denominator)
        if b:
            expr = expr + Rational(b.numerator, b.denominator) * sqrt(int(self.radicand))
        return self.from_sympy(expr)

    def dot(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        total = self.zero
        for a, b in zip(u, v):
            total = total + a * b
        return total

    def total(self, values: Iterable[Scalar]) -> Scalar:
        out = self.zero
        for v in values:
            out = out + v
        return out


def parse_token(token: str, *, r_squared: Any = None) -> Any:
    """Parse a generator token such as "R/sqrt2" or "-1/(R*sqrt(2))" into sympy."""
    text = _SQRT_SHORTHAND.sub(r"sqrt(\1)", str(token).strip()).replace("^", "**")
    if not text:
        raise ConfigError("empty scalar token")
    symbols: dict[str, Any] = {"sqrt": sqrt}
    if re.search(r"\bR\b", text):
        if r_squared is None:
            raise ConfigError(f"token '{token}' uses R but no r_squared is declared")
        symbols["R"] = sqrt(parse_r_squared(r_squared))
    try:
        expr = sympify(text, locals=symbols)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse scalar token '{token}'") from exc
    if expr.free_symbols:
        raise ConfigError(f"token '{token}' has unresolved symbols {sorted(map(str, expr.free_symbols))}")
    return expr


def parse_r_squared(value: Any) -> Any:
    if isinstance(value, Fraction):
        expr = Rational(value.numerator, value.denominator)
    elif isinstance(value, float):
        expr = sympy.Float(value)
    elif isinstance(value, str):
        try:
            expr = sympify(value.replace("^", "**"), locals={"sqrt": sqrt})
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ConfigError(f"cannot parse r_squared '{value}'") from exc
    else:
        expr = sympify(value)
    if expr.free_symbols or not expr.is_positive:
        raise ConfigError(f"r_squared must be a positive number, got {value!r}")
    return expr


def rational_r_squared(value: Any) -> Optional[Fraction]:
    expr = parse_r_squared(value)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    return None


def backend_for_r_squared(value: Any, *, tolerance: float = 1e-12, precision: int = 53) -> tuple[ScalarBackend, str]:
    """Smallest exact backend holding R/sqrt2 and 1/(R*sqrt2), else float."""
    r2 = rational_r_squared(value)
    if r2 is None:
        note = f"r_squared={value!r} is not rational, using float backend"
        return ScalarBackend(kind="float", tolerance=tolerance, precision=precision), note
    radicand = int(core(2 * r2.numerator * r2.denominator))
    if radicand == 1:
        return ScalarBackend(kind="rational"), f"r_squared={r2} keeps generators rational"
    return (
        ScalarBackend(kind="quadratic", radicand=radicand),
        f"r_squared={r2} needs QQ(sqrt({radicand}))",
    )
