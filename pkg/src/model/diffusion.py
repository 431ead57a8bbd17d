"""输入扩散 dξ = (S(t) - ξ)τ dt + γ√τ q(ξ) dW"""
import math
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.errors import SpecViolation
from src.gating.jet import Jet


class _InputDiffusion(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau: Annotated[float, Field(title="回复速率 τ (1/ms)", gt=0)]
    gamma: Annotated[float, Field(title="扩散强度 γ", ge=0)]

    @property
    def lower_bound(self) -> float:
        """开状态区间 U 的左端点"""
        return -math.inf

    def contains(self, zeta) -> bool:
        return bool(np.all(np.asarray(zeta) > self.lower_bound) and np.all(np.isfinite(zeta)))

    def q(self, zeta):
        raise NotImplementedError

    def q_of(self, zeta: Jet) -> Jet:
        raise NotImplementedError

    def d(self, zeta):
        """d(ζ) = γ√τ q(ζ)"""
        return self.gamma * math.sqrt(self.tau) * self.q(zeta)

    def d_of(self, zeta: Jet) -> Jet:
        return self.q_of(zeta) * (self.gamma * math.sqrt(self.tau))

    def d_jet(self, zeta: float, order: int) -> Jet:
        return self.d_of(Jet.variable(zeta, order))

    def stratonovich_shift(self, zeta):
        """½ d'(ζ) d(ζ)"""
        raise NotImplementedError

    def validate_signal(self, signal) -> None:
        return None


class OUInput(_InputDiffusion):
    """Ornstein-Uhlenbeck 输入，q ≡ 1"""
    kind: Literal["ou"] = "ou"

    def q(self, zeta):
        return 1.0 if np.ndim(zeta) == 0 else np.ones(np.shape(zeta))

    def q_of(self, zeta: Jet) -> Jet:
        return Jet.constant(1.0, zeta)

    def stratonovich_shift(self, zeta):
        return 0.0 if np.ndim(zeta) == 0 else np.zeros(np.shape(zeta))


class CIRInput(_InputDiffusion):
    """Cox-Ingersoll-Ross 型输入，q(x) = √((x+K) ∨ 0)"""
    kind: Literal["cir"] = "cir"
    K: Annotated[float, Field(title="平移常数 K", gt=0)]

    @property
    def lower_bound(self) -> float:
        return -self.K

    def q(self, zeta):
        if np.ndim(zeta) == 0:
            return math.sqrt(max(zeta + self.K, 0.0))
        return np.sqrt(np.maximum(np.asarray(zeta) + self.K, 0.0))

    def q_of(self, zeta: Jet) -> Jet:
        return (zeta + self.K).sqrt()

    def stratonovich_shift(self, zeta):
        # ζ + K > 0 处 d'd = γ²τ/2
        shift = 0.25 * self.gamma**2 * self.tau
        if np.ndim(zeta) == 0:
            return shift if zeta + self.K > 0 else 0.0
        return np.where(np.asarray(zeta) + self.K > 0, shift, 0.0)

    def validate_signal(self, signal) -> None:
        """K > γ²/2 + sup|S| 使边界 -K 不可达"""
        bound = 0.5 * self.gamma**2 + signal.sup_abs()
        if not self.K > bound:
            raise SpecViolation(f"CIR input needs K > γ²/2 + sup|S| = {bound:.6g}, got K = {self.K:.6g}")


InputDiffusionSpec = Annotated[Union[OUInput, CIRInput], Field(discriminator="kind")]
