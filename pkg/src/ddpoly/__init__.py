"""Dimension polynomials of difference-differential modules and field extensions."""

__version__ = "0.1.0"

from .errors import DDPolyError  # noqa: E402
from .kaehler import (  # noqa: E402
    ExtensionPresentation,
    IntermediateFieldSpec,
    chi_extension,
    chi_intermediate,
    compare_generator_sets,
    quasi_polynomial_probe,
)
from .monoid import PartitionSpec, Signature  # noqa: E402
from .numpoly import MultiNumericalPolynomial, NumericalPolynomial  # noqa: E402

__all__ = [
    "__version__",
    "DDPolyError",
    "Signature",
    "PartitionSpec",
    "NumericalPolynomial",
    "MultiNumericalPolynomial",
    "ExtensionPresentation",
    "IntermediateFieldSpec",
    "chi_extension",
    "chi_intermediate",
    "quasi_polynomial_probe",
    "compare_generator_sets",
]
