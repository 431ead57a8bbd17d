"""数值测试用的独立参照

速率函数直接写出，可接受复数参数；导数由小圆上的 Cauchy 积分给出，
不经过 jet 也不经过有限差分。
"""
import math

import numpy as np


def _phi(x):
    return x / (np.exp(x) - 1.0)


def alpha_n(z):
    return 0.1 * _phi(1.0 - 0.1 * z)


def beta_n(z):
    return 0.125 * np.exp(-z / 80.0)


def alpha_m(z):
    return _phi(2.5 - 0.1 * z)


def beta_m(z):
    return 4.0 * np.exp(-z / 18.0)


def alpha_h(z):
    return 0.07 * np.exp(-z / 20.0)


def beta_h(z):
    return 1.0 / (np.exp(3.0 - 0.1 * z) + 1.0)


RATES = {"n": (alpha_n, beta_n), "m": (alpha_m, beta_m), "h": (alpha_h, beta_h)}


def cauchy_derivatives(f, x0: float, max_order: int, radius: float = 4.0, nodes: int = 32) -> np.ndarray:
    """f^(k)(x0), k = 0..max_order, by the trapezoid rule on |z - x0| = radius.

    Nodes sit at half-steps so the circle never meets the real axis, where
    the direct φ quotient has its removable singularity.
    """
    theta = 2.0 * math.pi * (np.arange(nodes) + 0.5) / nodes
    values = f(x0 + radius * np.exp(1j * theta))
    k = np.arange(max_order + 1)
    taylor = (values[None, :] * np.exp(-1j * np.outer(k, theta))).mean(axis=1) / radius**k
    return np.real(taylor) * np.array([math.factorial(j) for j in k], dtype=float)


def gate_slope_derivatives(kind: str, v: float, x: float, max_order: int) -> np.ndarray:
    """∂ᵏ_v g for k = 0..max_order, where g = ∂_v [α(1 - x) - βx]."""
    alpha, beta = RATES[kind]
    return cauchy_derivatives(lambda z: alpha(z) * (1.0 - x) - beta(z) * x, v, max_order + 1)[1:]


def derivative_matrix(v: float, n: float, m: float, h: float) -> np.ndarray:
    return np.array([gate_slope_derivatives(kind, v, x, 3)[1:] for kind, x in zip("nmh", (n, m, h))])


def determinant(v: float, n: float, m: float, h: float) -> tuple[float, float]:
    """(D, product of row norms)"""
    matrix = derivative_matrix(v, n, m, h)
    return float(np.linalg.det(matrix)), float(np.prod(np.linalg.norm(matrix, axis=1)))


def steady(kind: str, v: float) -> float:
    alpha, beta = RATES[kind]
    a, b = alpha(v), beta(v)
    return float(a / (a + b))


def central_difference(f, x: float, order: int, h: float) -> float:
    """First or second central difference of f at x, extrapolated twice in h."""

    def difference(step: float) -> float:
        if order == 1:
            return (f(x + step) - f(x - step)) / (2.0 * step)
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / step**2

    d1, d2, d4 = difference(h), difference(h / 2), difference(h / 4)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d4 - d2) / 3.0
    return (16.0 * r2 - r1) / 15.0
