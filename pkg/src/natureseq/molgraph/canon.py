"""Deterministic canonical SMILES writer.

Canonical atom ranks come from iterative partition refinement over the
invariant tuple (element, degree, charge, hydrogen count, aromatic flag,
ring membership, isotope, attachment map), refined by neighbor color
multisets.  Remaining ties are broken by individualizing each member of the
first tied cell in turn and keeping the lexicographically least SMILES
writing, so the result is invariant under any permutation of input atom
order.  Stereo markers are parsed upstream but deliberately dropped here:
equality is constitutional.
"""

from __future__ import annotations

from .model import AROMATIC, Atom, Bond, MolecularGraph, find_rings
from .valence import bond_order_sum, implied_hydrogens

_ORDER_KEY = {1: 1, 2: 2, 3: 3, AROMATIC: 4}
_SHORTHAND_AROMATIC = frozenset(["B", "C", "N", "O", "P", "S"])
_SHORTHAND_PLAIN = frozenset(["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"])


def induced_subgraph(graph: MolecularGraph, atom_indices: list[int]) -> MolecularGraph:
    index = {old: new for new, old in enumerate(atom_indices)}
    sub = MolecularGraph()
    sub.atoms = [graph.atoms[i] for i in atom_indices]
    sub.neighbors = [[] for _ in atom_indices]
    for bond in graph.bonds:
        if bond.i in index and bond.j in index:
            sub.bonds.append(Bond(index[bond.i], index[bond.j], bond.order, bond.stereo))
            bidx = len(sub.bonds) - 1
            sub.neighbors[index[bond.i]].append(bidx)
            sub.neighbors[index[bond.j]].append(bidx)
    sub.ring_atoms, sub.ring_bonds = find_rings(sub)
    return sub


def _initial_colors(graph: MolecularGraph) -> list[int]:
    keys = []
    for idx, atom in enumerate(graph.atoms):
        keys.append(
            (
                atom.element,
                len(graph.neighbors[idx]),
                atom.charge,
                atom.total_h,
                atom.aromatic,
                idx in graph.ring_atoms,
                atom.isotope or 0,
                atom.map_number or 0,
            )
        )
    ranking = {key: rank for rank, key in enumerate(sorted(set(keys)))}
    return [ranking[k] for k in keys]


def _refine(graph: MolecularGraph, colors: list[int]) -> list[int]:
    while True:
        signatures = []
        for idx in range(len(graph.atoms)):
            neighbor_sig = sorted(
                (_ORDER_KEY[graph.bonds[b].order], colors[graph.bonds[b].other(idx)])
                for b in graph.neighbors[idx]
            )
            signatures.append((colors[idx], tuple(neighbor_sig)))
        ranking = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
        new_colors = [ranking[sig] for sig in signatures]
        if new_colors == colors:
            return colors
        colors = new_colors


def _first_tied_cell(colors: list[int]) -> list[int]:
    cells: dict[int, list[int]] = {}
    for idx, color in enumerate(colors):
        cells.setdefault(color, []).append(idx)
    for color in sorted(cells):
        if len(cells[color]) > 1:
            return cells[color]
    return []


def _canonical_component(graph: MolecularGraph, colors: list[int]) -> str:
    colors = _refine(graph, colors)
    cell = _first_tied_cell(colors)
    if not cell:
        return write_component(graph, colors)
    best: str | None = None
    for atom in cell:
        branched = list(colors)
        # Individualize: pull this atom ahead of its cell, then re-densify.
        branched[atom] -= 1
        dense = {c: r for r, c in enumerate(sorted(set(branched)))}
        candidate = _canonical_component(graph, [dense[c] for c in branched])
        if best is None or candidate < best:
            best = candidate
    return best  # type: ignore[return-value]


def canonical_form(graph: MolecularGraph) -> str:
    """Canonical SMILES; components sorted lexicographically and dot-joined."""
    parts = [
        _canonical_component(sub, _initial_colors(sub))
        for sub in (induced_subgraph(graph, comp) for comp in graph.components())
    ]
    return ".".join(sorted(parts))


def split_components(graph: MolecularGraph) -> list[MolecularGraph]:
    """Connected components, ordered by their canonical forms."""
    subs = [induced_subgraph(graph, comp) for comp in graph.components()]
    return sorted(subs, key=lambda sub: _canonical_component(sub, _initial_colors(sub)))


def _charge_suffix(charge: int) -> str:
    if charge == 0:
        return ""
    sign = "+" if charge > 0 else "-"
    magnitude = abs(charge)
    return sign if magnitude == 1 else f"{sign}{magnitude}"


def _atom_token(graph: MolecularGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    shorthand_set = _SHORTHAND_AROMATIC if atom.aromatic else _SHORTHAND_PLAIN
    plain_ok = (
        (atom.element in shorthand_set or atom.element == "*")
        and atom.charge == 0
        and atom.isotope is None
        and atom.map_number is None
        and (
            atom.element == "*"
            or atom.total_h
            == implied_hydrogens(atom.element, atom.aromatic, bond_order_sum(graph, idx))
        )
    )
    symbol = atom.element.lower() if atom.aromatic else atom.element
    if atom.element == "*":
        symbol = "*"
    if plain_ok:
        return symbol
    hydrogens = ""
    if atom.total_h == 1:
        hydrogens = "H"
    elif atom.total_h > 1:
        hydrogens = f"H{atom.total_h}"
    isotope = str(atom.isotope) if atom.isotope is not None else ""
    mapping = f":{atom.map_number}" if atom.map_number is not None else ""
    return f"[{isotope}{symbol}{hydrogens}{_charge_suffix(atom.charge)}{mapping}]"


def _bond_token(graph: MolecularGraph, bond: Bond) -> str:
    both_aromatic = graph.atoms[bond.i].aromatic and graph.atoms[bond.j].aromatic
    if bond.order == AROMATIC:
        return "" if both_aromatic else ":"
    if bond.order == 1:
        return "-" if both_aromatic else ""
    return "=" if bond.order == 2 else "#"


def write_component(graph: MolecularGraph, priority: list[int]) -> str:
    """Write one connected graph as SMILES, visiting atoms by priority."""
    root = min(range(len(graph.atoms)), key=lambda i: (priority[i], i))

    def ordered_bonds(idx: int) -> list[int]:
        return sorted(
            graph.neighbors[idx],
            key=lambda b: (priority[graph.bonds[b].other(idx)], graph.bonds[b].other(idx)),
        )

    # Pass 1: spanning tree in priority order; everything else closes a ring.
    tree: set[int] = set()
    children: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(graph.atoms))}
    visited: set[int] = {root}
    walk = [(root, iter(ordered_bonds(root)))]
    while walk:
        at, it = walk[-1]
        for bidx in it:
            nxt = graph.bonds[bidx].other(at)
            if nxt not in visited:
                visited.add(nxt)
                tree.add(bidx)
                children[at].append((bidx, nxt))
                walk.append((nxt, iter(ordered_bonds(nxt))))
                break
        else:
            walk.pop()

    # Ring-closure digit bookkeeping.
    digits_free = list(range(1, 100))
    open_digit: dict[int, int] = {}  # bond index -> digit

    def digit_token(n: int) -> str:
        return str(n) if n < 10 else f"%{n:02d}"

    def closures(at: int) -> str:
        out = []
        for bidx in ordered_bonds(at):
            if bidx in tree:
                continue
            bond = graph.bonds[bidx]
            if bidx in open_digit:
                digit = open_digit.pop(bidx)
                digits_free.insert(0, digit)
                digits_free.sort()
                out.append(digit_token(digit))
            else:
                digit = digits_free.pop(0)
                open_digit[bidx] = digit
                out.append(_bond_token(graph, bond) + digit_token(digit))
        return "".join(out)

    # Pass 2: emit tokens with an explicit frame stack so arbitrarily long
    # chains never hit the recursion limit.
    out: list[str] = []
    frames: list[tuple] = []

    def enter(at: int) -> None:
        out.append(_atom_token(graph, at))
        out.append(closures(at))
        frames.append(("kids", at, 0))

    enter(root)
    while frames:
        frame = frames.pop()
        if frame[0] == "emit":
            out.append(frame[1])
            continue
        if frame[0] == "enter":
            enter(frame[1])
            continue
        _, at, kidx = frame
        kids = children[at]
        if kidx >= len(kids):
            continue
        bidx, kid = kids[kidx]
        last = kidx == len(kids) - 1
        frames.append(("kids", at, kidx + 1))
        if not last:
            frames.append(("emit", ")"))
        frames.append(("enter", kid))
        frames.append(("emit", _bond_token(graph, graph.bonds[bidx])))
        if not last:
            frames.append(("emit", "("))
    return "".join(out)


def write_smiles(graph: MolecularGraph, priority: list[int] | None = None) -> str:
    """Write the whole graph; ``priority`` orders the DFS (defaults to input order)."""
    if priority is None:
        priority = list(range(len(graph.atoms)))
    parts = []
    for comp in graph.components():
        sub = induced_subgraph(graph, comp)
        parts.append(write_component(sub, [priority[i] for i in comp]))
    return ".".join(parts)
