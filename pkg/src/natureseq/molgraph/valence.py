"""Hydrogen model and valence validation.

The allowed-valence table covers the organic subset plus hydrogen; every
check is an exact table lookup:

    ==========  ================
    element     allowed valences
    ==========  ================
    B           3
    C           4
    N           3, 5
    O           2
    P           3, 5
    S           2, 4, 6
    F Cl Br I   1
    H           1
    ==========  ================

Charge shifts the whole list, with the sign of the shift depending on which
side of carbon the element sits (an extra electron on boron adds a bond, on
oxygen it removes one): ``+q`` for N/O/P/S/halogens, ``-q`` for B, and
``-|q|`` for C and H.  This reproduces the familiar cases: N+ 4, O- 1,
C+ and C- both 3, B- 4 (borates), bare H+ and H- 0.

Bond orders sum with aromatic bonds as one unit of sigma framework.  Implicit
hydrogens on shorthand (non-bracket) atoms:

* non-aromatic: lowest allowed valence >= bond sum, minus the bond sum;
  if no allowed valence is large enough the atom has zero implicit H and
  fails validation with ``ValenceExceeded``;
* aromatic: ``max(0, lowest_allowed - bond_sum - 1)`` -- one unit is
  reserved for the delocalized pi system.  This yields one H on an
  unsubstituted aromatic carbon with two ring bonds, zero on substituted or
  fusion carbons, and zero on aromatic N/O/S regardless of substitution.

Bracket atoms carry exactly their written hydrogens.  Validation flags an
atom when ``bond_sum + total_h`` exceeds the largest charge-adjusted allowed
valence; wildcards and elements outside the table are exempt.  Aromatic
atoms must additionally sit on a ring (``BadAromaticRing``).
"""

from __future__ import annotations

from .model import AROMATIC, MolecularGraph, ValidityFailure, ValidityReport

ALLOWED_VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
    "H": (1,),
}


def allowed_valences(element: str, charge: int) -> tuple[int, ...]:
    base = ALLOWED_VALENCES.get(element)
    if base is None:
        return ()
    if element == "B":
        shift = -charge
    elif element in ("C", "H"):
        shift = -abs(charge)
    else:
        shift = charge
    return tuple(v + shift for v in base if v + shift >= 0)


def bond_order_sum(graph: MolecularGraph, idx: int) -> int:
    total = 0
    for bidx in graph.neighbors[idx]:
        order = graph.bonds[bidx].order
        total += 1 if order == AROMATIC else int(order)
    return total


def implied_hydrogens(element: str, aromatic: bool, bond_sum: int) -> int:
    """Implicit H a shorthand atom gets for a given bond sum."""
    allowed = ALLOWED_VALENCES.get(element)
    if allowed is None:
        return 0
    if aromatic:
        return max(0, allowed[0] - bond_sum - 1)
    for valence in allowed:
        if valence >= bond_sum:
            return valence - bond_sum
    return 0


def fill_hydrogens(graph: MolecularGraph) -> None:
    """Finalize ``total_h`` for every atom (called once by the parser)."""
    for idx, atom in enumerate(graph.atoms):
        if atom.bracket:
            atom.total_h = atom.explicit_h or 0
        else:
            atom.total_h = implied_hydrogens(
                atom.element, atom.aromatic, bond_order_sum(graph, idx)
            )


def validate(graph: MolecularGraph) -> ValidityReport:
    """Valence and aromatic-ring checks; failures are data, not exceptions."""
    failures: list[ValidityFailure] = []
    for idx, atom in enumerate(graph.atoms):
        if atom.element == "*":
            continue
        if atom.aromatic and idx not in graph.ring_atoms:
            failures.append(ValidityFailure("BadAromaticRing", idx))
        allowed = allowed_valences(atom.element, atom.charge)
        if not allowed:
            if atom.element in ALLOWED_VALENCES:
                # charge shifted every allowed valence below zero
                failures.append(ValidityFailure("ValenceExceeded", idx))
            continue
        used = bond_order_sum(graph, idx) + atom.total_h
        if used > max(allowed):
            failures.append(ValidityFailure("ValenceExceeded", idx))
    return ValidityReport.fail(failures)
