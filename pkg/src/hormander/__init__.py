from src.hormander.brackets import (
    bracket_matrices,
    brackets_closed_form,
    diffusion_field,
    stratonovich_drift,
)
from src.hormander.determinant import determinant_D, equilibrium_D, normalized_D
from src.hormander.oracle import brackets_numeric_oracle, lie_bracket, oracle_vectors, xhh_fields
from src.hormander.report import DEFAULT_TOL_D, hormander_report, min_singular_value, normalized_bracket_matrix
from src.hormander.scan import equilibrium_curve, scan_equilibrium_curve, scan_orbit
