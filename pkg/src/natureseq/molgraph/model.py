"""Molecular graph data model.

Graphs are built by the parser and treated as immutable afterwards.  Bond
order uses integers 1/2/3 plus the sentinel ``AROMATIC``; for valence
arithmetic an aromatic bond counts as one unit of the sigma framework (see
``valence.py`` for the full hydrogen model).
"""

from __future__ import annotations

from dataclasses import dataclass, field

AROMATIC = "ar"

ORGANIC_SUBSET = frozenset(["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"])
AROMATIC_SUBSET = frozenset(["b", "c", "n", "o", "p", "s", "se", "as", "te"])


@dataclass
class Atom:
    element: str                  # canonical capitalization ("C", "Cl", "*")
    aromatic: bool = False
    charge: int = 0
    explicit_h: int | None = None  # None for organic-subset shorthand atoms
    isotope: int | None = None
    map_number: int | None = None
    bracket: bool = False
    chirality: str | None = None   # parsed, preserved, ignored by canonicalization
    total_h: int = 0               # filled in when the graph is finalized


@dataclass
class Bond:
    i: int
    j: int
    order: object  # 1 | 2 | 3 | AROMATIC
    stereo: str | None = None  # '/' or '\\' marker from the input, ignored

    def other(self, idx: int) -> int:
        return self.j if idx == self.i else self.i


@dataclass
class MolecularGraph:
    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)
    neighbors: list[list[int]] = field(default_factory=list)  # atom -> bond indices
    ring_atoms: set[int] = field(default_factory=set)
    ring_bonds: set[int] = field(default_factory=set)

    @property
    def attachment_points(self) -> list[tuple[int, int]]:
        """Wildcard atoms carrying a map number, e.g. ``[*:1]``."""
        return [
            (i, a.map_number)
            for i, a in enumerate(self.atoms)
            if a.element == "*" and a.map_number is not None
        ]

    def bond_between(self, i: int, j: int) -> Bond | None:
        for bidx in self.neighbors[i]:
            bond = self.bonds[bidx]
            if bond.other(i) == j:
                return bond
        return None

    def heavy_degree(self, idx: int) -> int:
        return sum(
            1
            for bidx in self.neighbors[idx]
            if self.atoms[self.bonds[bidx].other(idx)].element != "H"
        )

    def components(self) -> list[list[int]]:
        """Connected components as sorted atom-index lists, in discovery order."""
        seen: set[int] = set()
        out: list[list[int]] = []
        for start in range(len(self.atoms)):
            if start in seen:
                continue
            stack = [start]
            comp = []
            seen.add(start)
            while stack:
                at = stack.pop()
                comp.append(at)
                for bidx in self.neighbors[at]:
                    nxt = self.bonds[bidx].other(at)
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            out.append(sorted(comp))
        return out


@dataclass(frozen=True)
class ValidityFailure:
    code: str      # Syntax | UnclosedRing | UnbalancedBranch | ValenceExceeded | BadAromaticRing
    position: int  # byte offset for parse failures, atom index otherwise


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    failures: tuple[ValidityFailure, ...]

    @staticmethod
    def ok() -> "ValidityReport":
        return ValidityReport(True, ())

    @staticmethod
    def fail(failures: list[ValidityFailure]) -> "ValidityReport":
        return ValidityReport(not failures, tuple(failures))


def find_rings(graph: MolecularGraph) -> tuple[set[int], set[int]]:
    """Ring bonds (non-bridge edges) and ring atoms (their endpoints).

    Bridges found with the standard one-pass DFS low-link computation,
    iterative to survive deep chains.
    """
    n = len(graph.atoms)
    visited = [False] * n
    disc = [0] * n
    low = [0] * n
    timer = 0
    bridge_bonds: set[int] = set()

    for root in range(n):
        if visited[root]:
            continue
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]  # atom, parent bond, edge cursor
        while stack:
            at, pbond, cursor = stack.pop()
            if cursor == 0:
                visited[at] = True
                disc[at] = low[at] = timer
                timer += 1
            if cursor < len(graph.neighbors[at]):
                stack.append((at, pbond, cursor + 1))
                bidx = graph.neighbors[at][cursor]
                if bidx == pbond:
                    continue
                nxt = graph.bonds[bidx].other(at)
                if visited[nxt]:
                    low[at] = min(low[at], disc[nxt])
                else:
                    stack.append((nxt, bidx, 0))
            else:
                if pbond != -1:
                    parent = graph.bonds[pbond].other(at)
                    low[parent] = min(low[parent], low[at])
                    if low[at] > disc[parent]:
                        bridge_bonds.add(pbond)

    ring_bonds = {i for i in range(len(graph.bonds)) if i not in bridge_bonds}
    ring_atoms: set[int] = set()
    for bidx in ring_bonds:
        ring_atoms.add(graph.bonds[bidx].i)
        ring_atoms.add(graph.bonds[bidx].j)
    return ring_atoms, ring_bonds
