"""Dual numbers for forward-mode derivatives through the trace kernels.

The elementary functions below accept floats, ``mpmath.mpf`` values and
:class:`Dual` numbers alike, so every kernel written against them yields
derivatives for free when fed a dual input.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from typing import Any

import mpmath
from attrs import frozen

__all__ = [
    "Dual",
    "acosh",
    "asinh",
    "cosh",
    "derivative",
    "exp",
    "expm1",
    "log",
    "log1p",
    "primal",
    "sinh",
    "sqrt",
    "tanh",
]


def _parts(other: Any) -> tuple[Any, Any]:
    if isinstance(other, Dual):
        return other.value, other.deriv
    return other, 0


@frozen
class Dual:
    """``value + deriv·ε`` with ``ε² = 0``."""

    value: Any
    deriv: Any = 0

    def __add__(self, other: Any) -> Dual:
        v, d = _parts(other)
        return Dual(self.value + v, self.deriv + d)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Dual:
        v, d = _parts(other)
        return Dual(self.value - v, self.deriv - d)

    def __rsub__(self, other: Any) -> Dual:
        v, d = _parts(other)
        return Dual(v - self.value, d - self.deriv)

    def __mul__(self, other: Any) -> Dual:
        v, d = _parts(other)
        return Dual(self.value * v, self.value * d + self.deriv * v)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Dual:
        v, d = _parts(other)
        if v == 0:
            raise ZeroDivisionError("dual division by a zero real part")
        return Dual(self.value / v, (self.deriv * v - self.value * d) / (v * v))

    def __rtruediv__(self, other: Any) -> Dual:
        v, d = _parts(other)
        return Dual(v, d) / self

    def __neg__(self) -> Dual:
        return Dual(-self.value, -self.deriv)

    def __pos__(self) -> Dual:
        return self

    def __abs__(self) -> Dual:
        return -self if self.value < 0 else self

    def __pow__(self, n: int) -> Dual:
        if not isinstance(n, int):
            return NotImplemented
        return Dual(self.value**n, n * self.value ** (n - 1) * self.deriv)

    def __lt__(self, other: Any) -> bool:
        return bool(self.value < _parts(other)[0])

    def __le__(self, other: Any) -> bool:
        return bool(self.value <= _parts(other)[0])

    def __gt__(self, other: Any) -> bool:
        return bool(self.value > _parts(other)[0])

    def __ge__(self, other: Any) -> bool:
        return bool(self.value >= _parts(other)[0])

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"{self.value} + {self.deriv}ε"


def primal(x: Any) -> Any:
    """Real part of a possibly dual number."""
    return x.value if isinstance(x, Dual) else x


def derivative(x: Any) -> Any:
    """Dual part of a possibly dual number (0 for reals)."""
    return x.deriv if isinstance(x, Dual) else 0


def _lift(real_math: Callable[[float], float], real_mp: Any, slope: Callable[[Any, Any], Any]) -> Callable[[Any], Any]:
    """Build a function acting on reals and duals from its value and derivative rules.

    ``slope(x, fx)`` returns ``f'(x)`` given the argument and the value.
    """

    def real(x: Any) -> Any:
        if isinstance(x, mpmath.mpf):
            return real_mp(x)
        return real_math(float(x))

    def lifted(x: Any) -> Any:
        if isinstance(x, Dual):
            fx = lifted(x.value)
            return Dual(fx, slope(x.value, fx) * x.deriv)
        return real(x)

    return lifted


exp = _lift(math.exp, mpmath.exp, lambda x, fx: fx)
log = _lift(math.log, mpmath.log, lambda x, fx: 1 / x)
log1p = _lift(math.log1p, mpmath.log1p, lambda x, fx: 1 / (1 + x))
expm1 = _lift(math.expm1, mpmath.expm1, lambda x, fx: fx + 1)
sqrt = _lift(math.sqrt, mpmath.sqrt, lambda x, fx: 1 / (2 * fx))
sinh = _lift(math.sinh, mpmath.sinh, lambda x, fx: cosh(x))
cosh = _lift(math.cosh, mpmath.cosh, lambda x, fx: sinh(x))
tanh = _lift(math.tanh, mpmath.tanh, lambda x, fx: 1 - fx * fx)
acosh = _lift(math.acosh, mpmath.acosh, lambda x, fx: 1 / sqrt(x * x - 1))
asinh = _lift(math.asinh, mpmath.asinh, lambda x, fx: 1 / sqrt(x * x + 1))
