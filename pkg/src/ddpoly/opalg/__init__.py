"""Difference-differential operators, free modules over them and left Gröbner bases."""

from .algebra import ModuleElement, Operator, OreAlgebra, TermOrder, as_element, from_components
from .field import DerivationAction, GroundField, TranslationAction
from .groebner import groebner, is_member, lead_set, normal_form
from .parse import element_to_text, operator_to_text, parse_element, parse_operator


def op_mul(A, B):
    """Product in the operator ring (``A*B``)."""
    return A * B


def apply_inverse_translation(field: GroundField, a, j: int):
    """Scalar action of ``alpha_j^{-1}`` (``j`` 1-based) on a field element."""
    return field.translate_inverse(j - 1, a)


__all__ = [
    "GroundField", "DerivationAction", "TranslationAction",
    "OreAlgebra", "Operator", "ModuleElement", "TermOrder", "as_element", "from_components",
    "op_mul", "apply_inverse_translation",
    "normal_form", "groebner", "lead_set", "is_member",
    "parse_operator", "parse_element", "operator_to_text", "element_to_text",
]
