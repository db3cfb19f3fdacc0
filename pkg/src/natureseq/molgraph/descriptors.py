"""Graph-derived molecular descriptors.

Definitions (all derivable from the bond graph alone; nothing here needs
external parameter tables):

* ``hbd``  -- N or O atoms carrying at least one hydrogen
* ``hba``  -- all N and O atoms
* ``rot_bonds`` -- non-ring single bonds whose two heavy endpoints both have
  heavy degree >= 2, excluding amide C-N bonds
* ``fsp3`` -- non-aromatic carbons with only single bonds, over all carbons
* ``heavy_atoms`` -- atoms other than hydrogen
* ``components`` -- connected components
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import AROMATIC, MolecularGraph


@dataclass(frozen=True)
class DescriptorSet:
    hbd: int
    hba: int
    rot_bonds: int
    fsp3: float
    heavy_atoms: int
    components: int

    def as_dict(self) -> dict:
        return {
            "hbd": self.hbd,
            "hba": self.hba,
            "rot_bonds": self.rot_bonds,
            "fsp3": self.fsp3,
            "heavy_atoms": self.heavy_atoms,
            "components": self.components,
        }


def hydrogen_count(graph: MolecularGraph, idx: int) -> int:
    """Implicit/explicit H plus any neighboring explicit [H] atoms."""
    explicit_neighbors = sum(
        1
        for bidx in graph.neighbors[idx]
        if graph.atoms[graph.bonds[bidx].other(idx)].element == "H"
    )
    return graph.atoms[idx].total_h + explicit_neighbors


def _is_amide_cn(graph: MolecularGraph, i: int, j: int) -> bool:
    a, b = graph.atoms[i], graph.atoms[j]
    if {a.element, b.element} != {"C", "N"}:
        return False
    carbon = i if a.element == "C" else j
    for bidx in graph.neighbors[carbon]:
        bond = graph.bonds[bidx]
        if bond.order == 2 and graph.atoms[bond.other(carbon)].element == "O":
            return True
    return False


def descriptors(graph: MolecularGraph) -> DescriptorSet:
    hbd = 0
    hba = 0
    for idx, atom in enumerate(graph.atoms):
        if atom.element in ("N", "O"):
            hba += 1
            if hydrogen_count(graph, idx) >= 1:
                hbd += 1

    rot = 0
    for bidx, bond in enumerate(graph.bonds):
        if bond.order != 1 or bidx in graph.ring_bonds:
            continue
        ai, aj = graph.atoms[bond.i], graph.atoms[bond.j]
        if ai.element == "H" or aj.element == "H":
            continue
        if graph.heavy_degree(bond.i) < 2 or graph.heavy_degree(bond.j) < 2:
            continue
        if _is_amide_cn(graph, bond.i, bond.j):
            continue
        rot += 1

    carbons = 0
    sp3 = 0
    for idx, atom in enumerate(graph.atoms):
        if atom.element != "C":
            continue
        carbons += 1
        if atom.aromatic:
            continue
        if all(graph.bonds[b].order == 1 for b in graph.neighbors[idx]):
            sp3 += 1
    fsp3 = sp3 / carbons if carbons else 0.0

    heavy = sum(1 for atom in graph.atoms if atom.element != "H")
    return DescriptorSet(
        hbd=hbd,
        hba=hba,
        rot_bonds=rot,
        fsp3=fsp3,
        heavy_atoms=heavy,
        components=len(graph.components()),
    )
