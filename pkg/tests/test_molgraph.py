from __future__ import annotations

import random

import pytest

from natureseq.molgraph import (
    canonical_form,
    check_smiles,
    descriptors,
    parse_smiles,
    split_components,
    validate,
    write_smiles,
)
from natureseq.molgraph.parser import SmilesParseError
from natureseq.molgraph.valence import ALLOWED_VALENCES, allowed_valences

from _genmol import random_graph


class TestParse:
    def test_benzene(self):
        g = parse_smiles("c1ccccc1")
        assert len(g.atoms) == 6
        assert len(g.bonds) == 6
        assert all(a.aromatic and a.element == "C" for a in g.atoms)
        assert all(b.order == "ar" for b in g.bonds)

    def test_fragment_attachment_points(self):
        g = parse_smiles("O=c1[nH]cnc2c(O)cc([*:1])c([*:2])c12")
        assert sorted(m for _, m in g.attachment_points) == [1, 2]

    def test_bracket_atom_fields(self):
        g = parse_smiles("[13CH3+]")
        atom = g.atoms[0]
        assert atom.isotope == 13
        assert atom.total_h == 3
        assert atom.charge == 1

    def test_charges(self):
        assert parse_smiles("[Fe+2]").atoms[0].charge == 2
        assert parse_smiles("[O-]").atoms[0].charge == -1
        assert parse_smiles("[N+](C)(C)(C)C").atoms[0].charge == 1

    def test_dot_components(self):
        g = parse_smiles("CNC.CCO")
        assert len(g.components()) == 2

    def test_ring_closure_orders(self):
        g = parse_smiles("C=1CCCCC=1")
        orders = sorted(str(b.order) for b in g.bonds)
        assert "2" in orders

    def test_conflicting_ring_orders(self):
        with pytest.raises(SmilesParseError):
            parse_smiles("C=1CCCCC#1")

    def test_unclosed_ring(self):
        with pytest.raises(SmilesParseError) as err:
            parse_smiles("C1CC")
        assert err.value.failure_code == "UnclosedRing"

    def test_unbalanced_branch(self):
        for bad in ("C(C", "CC)C"):
            with pytest.raises(SmilesParseError) as err:
                parse_smiles(bad)
            assert err.value.failure_code == "UnbalancedBranch"

    def test_dangling_bond(self):
        with pytest.raises(SmilesParseError) as err:
            parse_smiles("CC=")
        assert err.value.failure_code == "Syntax"

    def test_bad_bracket(self):
        with pytest.raises(SmilesParseError):
            parse_smiles("[Xx]")

    def test_duplicate_bond_rejected(self):
        with pytest.raises(SmilesParseError):
            parse_smiles("C12CC12")

    def test_duplicate_attachment_map_rejected(self):
        with pytest.raises(SmilesParseError):
            parse_smiles("C([*:1])C[*:1]")

    def test_offsets_are_bytes(self):
        with pytest.raises(SmilesParseError) as err:
            parse_smiles("CC(C")
        assert err.value.position == len("CC(C") - 1 or err.value.position >= 2


class TestValidate:
    def test_benzene_valid(self):
        assert validate(parse_smiles("c1ccccc1")).valid

    def test_pentavalent_carbon(self):
        report = validate(parse_smiles("C(C)(C)(C)(C)C"))
        assert not report.valid
        assert report.failures[0].code == "ValenceExceeded"

    def test_acyclic_aromatic(self):
        report = validate(parse_smiles("cc"))
        assert not report.valid
        assert {f.code for f in report.failures} == {"BadAromaticRing"}

    def test_corpus_all_valid(self, smiles_corpus):
        for s in smiles_corpus:
            report = check_smiles(s)
            assert report.valid, (s, report.failures)

    def test_check_smiles_catches_parse_error(self):
        report = check_smiles("C1CC")
        assert not report.valid
        assert report.failures[0].code == "UnclosedRing"

    def test_charge_adjusted_valences(self):
        # exact table lookups, not folklore
        assert allowed_valences("N", +1) == (4, 6)
        assert allowed_valences("O", -1) == (1,)
        assert allowed_valences("B", -1) == (4,)
        assert allowed_valences("C", +1) == (3,)
        assert allowed_valences("C", -1) == (3,)
        assert validate(parse_smiles("CC[B-](F)(F)F")).valid
        assert validate(parse_smiles("C[N+](C)(C)C")).valid
        assert not validate(parse_smiles("C[O-]C")).valid
        assert not validate(parse_smiles("CO(C)C")).valid

    def test_aromatic_hydrogen_model(self):
        # documented divergence area: counts are exact table lookups
        assert parse_smiles("c1ccccc1").atoms[0].total_h == 1
        toluene = parse_smiles("Cc1ccccc1")
        ipso = toluene.atoms[1]
        assert ipso.total_h == 0
        pyridine_n = next(a for a in parse_smiles("c1ccncc1").atoms if a.element == "N")
        assert pyridine_n.total_h == 0
        furan_o = next(a for a in parse_smiles("c1ccoc1").atoms if a.element == "O")
        assert furan_o.total_h == 0


class TestCanonical:
    def test_same_molecule_same_form(self):
        assert canonical_form(parse_smiles("C(O)C")) == canonical_form(parse_smiles("CCO"))
        assert canonical_form(parse_smiles("OCC")) == canonical_form(parse_smiles("CCO"))

    def test_constitutional_isomers_differ(self):
        assert canonical_form(parse_smiles("CCO")) != canonical_form(parse_smiles("COC"))

    def test_fixed_point_on_corpus(self, smiles_corpus):
        for s in smiles_corpus[:100]:
            c = canonical_form(parse_smiles(s))
            assert canonical_form(parse_smiles(c)) == c, s

    def test_permutation_invariance_random_graphs(self):
        rng = random.Random(11)
        for _ in range(120):
            g = random_graph(rng, max_atoms=10)
            ref = canonical_form(g)
            for _ in range(8):
                perm = list(range(len(g.atoms)))
                rng.shuffle(perm)
                assert canonical_form(parse_smiles(write_smiles(g, perm))) == ref

    def test_stereo_ignored(self):
        assert canonical_form(parse_smiles("C/C=C/C")) == canonical_form(
            parse_smiles("CC=CC")
        )
        assert canonical_form(parse_smiles("N[C@@H](C)C(=O)O")) == canonical_form(
            parse_smiles("NC(C)C(=O)O")
        )

    def test_explicit_h_equivalence(self):
        assert canonical_form(parse_smiles("[CH4]")) == canonical_form(parse_smiles("C"))


class TestDescriptors:
    def test_methane(self):
        d = descriptors(parse_smiles("C"))
        assert (d.hbd, d.hba, d.rot_bonds, d.fsp3) == (0, 0, 0, 1.0)

    def test_ethanol(self):
        d = descriptors(parse_smiles("CCO"))
        assert (d.hbd, d.hba, d.fsp3) == (1, 1, 1.0)

    def test_arginine_donors(self):
        d = descriptors(parse_smiles("C(C[C@@H](C(=O)O)N)CN=C(N)N"))
        assert d.hbd == 4

    def test_rotatable_bonds(self):
        assert descriptors(parse_smiles("CCCC")).rot_bonds == 1
        assert descriptors(parse_smiles("CC(=O)NC")).rot_bonds == 0  # amide excluded
        assert descriptors(parse_smiles("c1ccccc1Cc1ccccc1")).rot_bonds == 2
        assert descriptors(parse_smiles("C1CCCCC1")).rot_bonds == 0  # ring

    def test_fsp3(self):
        assert descriptors(parse_smiles("C=CC")).fsp3 == pytest.approx(1 / 3)
        assert descriptors(parse_smiles("c1ccccc1")).fsp3 == 0.0

    def test_order_independent(self, smiles_corpus):
        rng = random.Random(3)
        for s in smiles_corpus[:30]:
            g = parse_smiles(s)
            base = descriptors(g)
            perm = list(range(len(g.atoms)))
            rng.shuffle(perm)
            assert descriptors(parse_smiles(write_smiles(g, perm))) == base


class TestComponents:
    def test_reactants_split(self):
        parts = split_components(parse_smiles("CNC.C1(=O)CCCC1Cc1c[nH]c2ccc(C#N)cc12"))
        assert len(parts) == 2

    def test_single_component(self):
        assert len(split_components(parse_smiles("CCO"))) == 1

    def test_ionic_split(self):
        parts = split_components(parse_smiles("[Fe+2].CC(=O)[O-].CC(=O)[O-]"))
        assert len(parts) == 3

    def test_deterministic_order(self):
        a = [canonical_form(g) for g in split_components(parse_smiles("CCO.CNC"))]
        b = [canonical_form(g) for g in split_components(parse_smiles("CNC.CCO"))]
        assert a == b == sorted(a)


def test_valence_table_contents():
    assert ALLOWED_VALENCES["C"] == (4,)
    assert ALLOWED_VALENCES["N"] == (3, 5)
    assert ALLOWED_VALENCES["S"] == (2, 4, 6)
