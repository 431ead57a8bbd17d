"""截断 Taylor jet

基点 x0 处 K 阶 jet 存 c[k] = f^(k)(x0)/k!，k <= K。
系数可以带尾部的批维度，一个 jet 即可描述整组基点。
"""
from math import factorial

import numpy as np

from src.errors import JetOrderError

DEFAULT_ORDER = 6


class Jet:
    __slots__ = ("base_point", "coeffs")
    __array_ufunc__ = None

    def __init__(self, base_point, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim == 0 or coeffs.shape[0] < 1:
            raise JetOrderError("a jet needs at least one coefficient")
        self.base_point = np.asarray(base_point, dtype=float)
        self.coeffs = coeffs

    @classmethod
    def variable(cls, x, order: int = DEFAULT_ORDER) -> "Jet":
        """自变量 x 本身的 jet"""
        x = np.asarray(x, dtype=float)
        coeffs = np.zeros((order + 1, *x.shape))
        coeffs[0] = x
        if order >= 1:
            coeffs[1] = 1.0
        return cls(x, coeffs)

    @classmethod
    def constant(cls, value, like: "Jet") -> "Jet":
        coeffs = np.zeros_like(like.coeffs)
        coeffs[0] = value
        return cls(like.base_point, coeffs)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivatives(self, max_order: int | None = None) -> np.ndarray:
        """普通导数 f^(k)(x0)，k = 0..max_order"""
        max_order = self.order if max_order is None else max_order
        if max_order > self.order:
            raise JetOrderError(f"derivative order {max_order} exceeds jet order {self.order}")
        scale = np.array([factorial(k) for k in range(max_order + 1)], dtype=float)
        return self.coeffs[: max_order + 1] * scale.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def derivative(self) -> "Jet":
        """同一点处 f' 的 jet，阶数减一"""
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return Jet(self.base_point, self.coeffs[1:] * k)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetOrderError(f"cannot extend a jet of order {self.order} to {order}")
        return Jet(self.base_point, self.coeffs[: order + 1])

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))

    def _coerce(self, other) -> tuple[np.ndarray, np.ndarray]:
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            return self.coeffs[: order + 1], other.coeffs[: order + 1]
        coeffs = np.zeros(np.broadcast_shapes(self.coeffs.shape, (1,) + np.shape(other)))
        coeffs[0] = other
        return self.coeffs, coeffs

    def __add__(self, other) -> "Jet":
        a, b = self._coerce(other)
        return Jet(self.base_point, a + b)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.base_point, -self.coeffs)

    def __sub__(self, other) -> "Jet":
        a, b = self._coerce(other)
        return Jet(self.base_point, a - b)

    def __rsub__(self, other) -> "Jet":
        a, b = self._coerce(other)
        return Jet(self.base_point, b - a)

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.base_point, self.coeffs * np.asarray(other, dtype=float))
        a, b = self._coerce(other)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for k in range(out.shape[0]):
            for j in range(k + 1):
                out[k] += a[j] * b[k - j]
        return Jet(self.base_point, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.base_point, self.coeffs / np.asarray(other, dtype=float))
        a, b = self._coerce(other)
        return Jet(self.base_point, _divide(a, b))

    def __rtruediv__(self, other) -> "Jet":
        a, b = self._coerce(other)
        return Jet(self.base_point, _divide(b, a))

    def __pow__(self, power: int) -> "Jet":
        if not isinstance(power, int) or power < 0:
            raise TypeError("jets support non-negative integer powers only")
        result = Jet.constant(1.0, self)
        for _ in range(power):
            result = result * self
        return result

    def exp(self) -> "Jet":
        a = self.coeffs
        out = np.zeros_like(a)
        out[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            for j in range(1, k + 1):
                out[k] += j * a[j] * out[k - j]
            out[k] /= k
        return Jet(self.base_point, out)

    def expm1(self) -> "Jet":
        # e^f - 1 与 e^f 导数相同，只有常数项不同
        out = self.exp().coeffs
        out[0] = np.expm1(self.coeffs[0])
        return Jet(self.base_point, out)

    def sqrt(self) -> "Jet":
        a = self.coeffs
        out = np.zeros_like(a)
        out[0] = np.sqrt(a[0])
        for k in range(1, a.shape[0]):
            acc = a[k].copy()
            for j in range(1, k):
                acc -= out[j] * out[k - j]
            out[k] = acc / (2.0 * out[0])
        return Jet(self.base_point, out)

    def __repr__(self) -> str:
        return f"Jet(base_point={self.base_point!r}, coeffs={self.coeffs!r})"


def _divide(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = np.broadcast_shapes(a.shape, b.shape)
    a = np.broadcast_to(a, shape)
    out = np.zeros(shape)
    for k in range(shape[0]):
        acc = a[k].copy()
        for j in range(1, k + 1):
            acc -= b[j] * out[k - j]
        out[k] = acc / b[0]
    return out
