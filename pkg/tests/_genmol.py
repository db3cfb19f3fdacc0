"""Random valid-molecule generator for property tests.

Builds graphs directly (random spanning tree plus optional ring edges,
orders capped by the element's lowest allowed valence) and renders them
through the package writer, so generated strings always parse back to the
same constitution.
"""

from __future__ import annotations

import random

from natureseq.molgraph.model import Atom, Bond, MolecularGraph, find_rings
from natureseq.molgraph.valence import ALLOWED_VALENCES, fill_hydrogens
from natureseq.molgraph.canon import write_smiles

_ELEMENTS = ["C", "C", "C", "C", "N", "O", "S", "P", "F", "Cl", "Br", "I"]
_MONOVALENT = {"F", "Cl", "Br", "I"}


def random_graph(rng: random.Random, max_atoms: int = 12) -> MolecularGraph:
    n = rng.randint(1, max_atoms)
    graph = MolecularGraph()
    capacity: list[int] = []
    for i in range(n):
        element = rng.choice(_ELEMENTS)
        graph.atoms.append(Atom(element=element))
        graph.neighbors.append([])
        capacity.append(min(ALLOWED_VALENCES[element]))

    def bond(i: int, j: int, order: int) -> None:
        graph.bonds.append(Bond(i, j, order))
        bidx = len(graph.bonds) - 1
        graph.neighbors[i].append(bidx)
        graph.neighbors[j].append(bidx)
        capacity[i] -= order
        capacity[j] -= order

    for i in range(1, n):
        candidates = [j for j in range(i) if capacity[j] >= 1]
        if not candidates:
            continue
        j = rng.choice(candidates)
        max_order = min(capacity[i], capacity[j], 3)
        order = 1
        if max_order >= 2 and rng.random() < 0.25:
            order = rng.randint(2, max_order)
        bond(i, j, order)

    # a few ring-closing edges between existing atoms with spare capacity
    for _ in range(rng.randint(0, 2)):
        open_atoms = [
            i
            for i in range(n)
            if capacity[i] >= 1 and graph.atoms[i].element not in _MONOVALENT
        ]
        rng.shuffle(open_atoms)
        added = False
        for a in open_atoms:
            for b in open_atoms:
                if b <= a or graph.bond_between(a, b) is not None:
                    continue
                bond(a, b, 1)
                added = True
                break
            if added:
                break

    graph.ring_atoms, graph.ring_bonds = find_rings(graph)
    fill_hydrogens(graph)
    return graph


def random_smiles(rng: random.Random, max_atoms: int = 12) -> str:
    graph = random_graph(rng, max_atoms)
    perm = list(range(len(graph.atoms)))
    rng.shuffle(perm)
    return write_smiles(graph, perm)
