"""From-scratch SMILES parser.

Supports branches, ring closures (digits and ``%NN``), dot-disconnected
components, bond symbols ``- = # : / \\``, and bracket atoms with isotope,
chirality, explicit hydrogens, charge, and atom-map numbers (including the
wildcard fragment-attachment convention ``[*:n]``).

Structural errors raise :class:`SmilesParseError` whose ``code`` is one of
``Syntax``, ``UnclosedRing``, ``UnbalancedBranch``, each carrying the byte
offset of the offending token.
"""

from __future__ import annotations

import re

from ..errors import ToolkitError
from ..tok import tokenize_smiles
from .model import (
    AROMATIC,
    AROMATIC_SUBSET,
    Atom,
    Bond,
    MolecularGraph,
    ORGANIC_SUBSET,
    find_rings,
)
from .valence import fill_hydrogens

_BRACKET_RE = re.compile(
    r"""\[
        (?P<isotope>\d+)?
        (?P<symbol>\*|[A-Z][a-z]?|[a-z]{1,2})
        (?P<chiral>@{1,2}(?:TH\d|AL\d|SP\d|TB\d\d?|OH\d\d?)?)?
        (?P<hcount>H\d*)?
        (?P<charge>\+\+|--|[+-]\d+|[+-])?
        (?::(?P<map>\d+))?
    \]\Z""",
    re.VERBOSE,
)

_BOND_ORDERS = {"-": 1, "=": 2, "#": 3, ":": AROMATIC}

from ..periodic import ELEMENT_SET


class SmilesParseError(ToolkitError):
    def __init__(self, code: str, message: str, position: int):
        super().__init__(f"{code}: {message} (offset {position})")
        self.failure_code = code
        self.position = position


def _parse_bracket_atom(token: str, position: int) -> Atom:
    match = _BRACKET_RE.match(token)
    if not match:
        raise SmilesParseError("Syntax", f"bad bracket atom {token!r}", position)
    symbol = match.group("symbol")
    aromatic = False
    if symbol == "*":
        element = "*"
    elif symbol[0].islower():
        if symbol not in AROMATIC_SUBSET:
            raise SmilesParseError(
                "Syntax", f"unknown aromatic symbol {symbol!r}", position
            )
        element = symbol.capitalize()
        aromatic = True
    else:
        element = symbol
        if element not in ELEMENT_SET:
            raise SmilesParseError("Syntax", f"unknown element {element!r}", position)

    hcount_field = match.group("hcount")
    if hcount_field is None:
        explicit_h = 0
    elif hcount_field == "H":
        explicit_h = 1
    else:
        explicit_h = int(hcount_field[1:])

    charge_field = match.group("charge")
    if charge_field is None:
        charge = 0
    elif charge_field == "++":
        charge = 2
    elif charge_field == "--":
        charge = -2
    elif len(charge_field) == 1:
        charge = 1 if charge_field == "+" else -1
    else:
        charge = int(charge_field)

    isotope = match.group("isotope")
    map_number = match.group("map")
    return Atom(
        element=element,
        aromatic=aromatic,
        charge=charge,
        explicit_h=explicit_h,
        isotope=int(isotope) if isotope else None,
        map_number=int(map_number) if map_number else None,
        bracket=True,
        chirality=match.group("chiral"),
    )


def parse_smiles(s: str) -> MolecularGraph:
    """Parse a SMILES string into a finalized molecular graph."""
    tokens = tokenize_smiles(s)
    graph = MolecularGraph()
    prev_atom: int | None = None
    branch_stack: list[int | None] = []
    pending_bond: tuple[object, str | None, int] | None = None  # order, stereo, offset
    open_rings: dict[str, tuple[int, object | None, str | None, int]] = {}
    pos = 0

    def add_atom(atom: Atom, offset: int) -> None:
        nonlocal prev_atom, pending_bond
        graph.atoms.append(atom)
        graph.neighbors.append([])
        idx = len(graph.atoms) - 1
        if prev_atom is not None:
            order, stereo, _ = pending_bond or (None, None, offset)
            if order is None:
                both_aromatic = graph.atoms[prev_atom].aromatic and atom.aromatic
                order = AROMATIC if both_aromatic else 1
            _add_bond(prev_atom, idx, order, stereo, offset)
        elif pending_bond is not None:
            raise SmilesParseError(
                "Syntax", "bond symbol with no preceding atom", pending_bond[2]
            )
        pending_bond = None
        prev_atom = idx

    def _add_bond(i: int, j: int, order: object, stereo: str | None, offset: int) -> None:
        if i == j:
            raise SmilesParseError("Syntax", "ring bond to the same atom", offset)
        if graph.bond_between(i, j) is not None:
            raise SmilesParseError("Syntax", "duplicate bond between atoms", offset)
        graph.bonds.append(Bond(i, j, order, stereo))
        bidx = len(graph.bonds) - 1
        graph.neighbors[i].append(bidx)
        graph.neighbors[j].append(bidx)

    def close_ring(label: str, offset: int) -> None:
        nonlocal pending_bond
        if prev_atom is None:
            raise SmilesParseError("Syntax", "ring closure before any atom", offset)
        here_order, here_stereo, _ = pending_bond or (None, None, offset)
        pending_bond = None
        if label in open_rings:
            other_atom, other_order, other_stereo, _ = open_rings.pop(label)
            if here_order is not None and other_order is not None and here_order != other_order:
                raise SmilesParseError(
                    "Syntax", f"conflicting bond orders on ring closure {label}", offset
                )
            order = here_order if here_order is not None else other_order
            if order is None:
                both_aromatic = (
                    graph.atoms[other_atom].aromatic and graph.atoms[prev_atom].aromatic
                )
                order = AROMATIC if both_aromatic else 1
            _add_bond(other_atom, prev_atom, order, here_stereo or other_stereo, offset)
        else:
            open_rings[label] = (prev_atom, here_order, here_stereo, offset)

    for token in tokens:
        offset = pos
        pos += len(token)
        if token.startswith("["):
            add_atom(_parse_bracket_atom(token, offset), offset)
        elif token in ORGANIC_SUBSET or token == "*":
            add_atom(Atom(element=token if token != "*" else "*"), offset)
        elif token in ("b", "c", "n", "o", "s", "p"):
            add_atom(Atom(element=token.upper(), aromatic=True), offset)
        elif token in _BOND_ORDERS:
            if pending_bond is not None:
                raise SmilesParseError("Syntax", "two bond symbols in a row", offset)
            pending_bond = (_BOND_ORDERS[token], None, offset)
        elif token in ("/", "\\"):
            if pending_bond is not None:
                raise SmilesParseError("Syntax", "two bond symbols in a row", offset)
            pending_bond = (1, token, offset)
        elif token == "(":
            if prev_atom is None:
                raise SmilesParseError("Syntax", "branch before any atom", offset)
            if pending_bond is not None:
                raise SmilesParseError("Syntax", "bond symbol before branch open", offset)
            branch_stack.append(prev_atom)
        elif token == ")":
            if not branch_stack:
                raise SmilesParseError("UnbalancedBranch", "unmatched ')'", offset)
            if pending_bond is not None:
                raise SmilesParseError("Syntax", "dangling bond symbol", pending_bond[2])
            prev_atom = branch_stack.pop()
        elif token == ".":
            if pending_bond is not None:
                raise SmilesParseError("Syntax", "bond symbol before dot", pending_bond[2])
            prev_atom = None
        elif token.isdigit() or token.startswith("%"):
            close_ring(token.lstrip("%").lstrip("0") or "0", offset)
        else:
            # '~', '?', '$', '>', '@' are tokenized but carry reaction/query
            # semantics this graph model does not represent.
            raise SmilesParseError("Syntax", f"unsupported token {token!r}", offset)

    if pending_bond is not None:
        raise SmilesParseError("Syntax", "dangling bond symbol", pending_bond[2])
    if branch_stack:
        raise SmilesParseError("UnbalancedBranch", "unclosed '('", len(s) - 1)
    if open_rings:
        label, (_, _, _, offset) = min(open_rings.items(), key=lambda kv: kv[1][3])
        raise SmilesParseError("UnclosedRing", f"ring bond {label} never closed", offset)
    if not graph.atoms:
        raise SmilesParseError("Syntax", "no atoms", 0)
    maps = [m for _, m in _wildcard_maps(graph)]
    if len(maps) != len(set(maps)):
        raise SmilesParseError("Syntax", "duplicate attachment-point map number", 0)

    graph.ring_atoms, graph.ring_bonds = find_rings(graph)
    fill_hydrogens(graph)
    return graph


def _wildcard_maps(graph: MolecularGraph) -> list[tuple[int, int]]:
    return [
        (i, a.map_number)
        for i, a in enumerate(graph.atoms)
        if a.element == "*" and a.map_number is not None
    ]
