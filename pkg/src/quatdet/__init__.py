"""Quaternionic linear algebra centred on the Study determinant."""
from .blockinv import (
    block_factorization,
    block_inverse,
    four_expressions,
    gauss_inverse,
    inverse_2x2,
    inverse_2x2_hadamard,
    invert,
    schur_complement,
)
from .qdet import (
    DetReport,
    det_report,
    double_det,
    double_det_squared,
    extension_counterexample,
    hermitian_det,
    is_positive_definite,
    sdet,
    wrong2_expressions,
)
from .qmatrix import QMatrix, adjoint, complexify, decomplexify, is_hermitian, is_unitary, matmul
from .quaternion import Quaternion, complex_representative, similar, solve_quadratic
from .spectral import right_eigenvalues, right_eigenvector, schur, singular_values, svd

# qdet()/ddet() stay in quatdet.qdet so the submodule name is not shadowed
__version__ = "0.1.0"
