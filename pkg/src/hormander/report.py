import logging

import numpy as np

from src.hormander.brackets import brackets_closed_form
from src.hormander.determinant import determinant_D, normalized_D
from src.model import HormanderReport, State5

logger = logging.getLogger(__name__)

DEFAULT_TOL_D = 1e-8


def _normalize_columns(matrix: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(matrix, axis=-2, keepdims=True)
    return matrix / np.where(norm > 0, norm, 1.0)


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(matrix, axis=-1, keepdims=True)
    return matrix / np.where(norm > 0, norm, 1.0)


def normalized_bracket_matrix(matrix: np.ndarray) -> np.ndarray:
    """列归一化，行均衡一次，再列归一化；支持 (..., 5, 5)"""
    return _normalize_columns(_normalize_rows(_normalize_columns(np.asarray(matrix, dtype=float))))


def min_singular_value(matrix: np.ndarray) -> np.ndarray | float:
    values = np.linalg.svd(normalized_bracket_matrix(matrix), compute_uv=False)[..., -1]
    return float(values) if np.ndim(values) == 0 else values


def hormander_report(t: float, x: State5, spec, signal, tol_D: float = DEFAULT_TOL_D) -> HormanderReport:
    """D、秩与 Gram 矩阵最小特征值"""
    state = x.projection()
    brackets = brackets_closed_form(t, x, spec, signal)
    matrix = brackets.matrix()
    D_norm = normalized_D(state)
    # Σ_V ⟨V, η⟩² over unit η is the smallest eigenvalue of M Mᵀ
    gram = float(np.linalg.eigvalsh(matrix @ matrix.T)[0])
    report = HormanderReport(
        D_value=determinant_D(state),
        D_normalized=D_norm,
        min_singular_value=min_singular_value(matrix),
        V_L_gram=max(gram, 0.0),
        in_O=abs(D_norm) > tol_D,
    )
    logger.debug("hörmander report at t=%g: %s", t, report)
    return report
