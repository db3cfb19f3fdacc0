"""SMILES parsing, validity, canonicalization, and descriptors."""

from .canon import canonical_form, split_components, write_smiles
from .descriptors import DescriptorSet, descriptors
from .model import (
    AROMATIC,
    Atom,
    Bond,
    MolecularGraph,
    ValidityFailure,
    ValidityReport,
)
from .parser import SmilesParseError, parse_smiles
from .valence import ALLOWED_VALENCES, validate

__all__ = [
    "ALLOWED_VALENCES",
    "AROMATIC",
    "Atom",
    "Bond",
    "DescriptorSet",
    "MolecularGraph",
    "SmilesParseError",
    "ValidityFailure",
    "ValidityReport",
    "canonical_form",
    "check_smiles",
    "descriptors",
    "parse_smiles",
    "split_components",
    "validate",
    "write_smiles",
]


def check_smiles(s: str) -> ValidityReport:
    """Parse and validate in one step; parser errors become report failures."""
    from ..errors import TokenizeError

    try:
        graph = parse_smiles(s)
    except SmilesParseError as exc:
        return ValidityReport(
            False, (ValidityFailure(exc.failure_code, exc.position),)
        )
    except TokenizeError as exc:
        return ValidityReport(False, (ValidityFailure("Syntax", exc.position),))
    return validate(graph)
