from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from natureseq.errors import PrecisionError, StructureError, TokenizeError
from natureseq.tok import (
    TaggedSequence,
    detokenize,
    parse_tagged,
    tokenize_number,
    tokenize_residues,
    tokenize_smiles,
    wrap,
)

from _genmol import random_smiles


class TestTokenizeSmiles:
    def test_benzene(self):
        assert tokenize_smiles("c1ccccc1") == ["c", "1", "c", "c", "c", "c", "c", "1"]

    def test_reactants_example(self):
        tokens = tokenize_smiles("CNC.C1(=O)CCCC1Cc1c[nH]c2ccc(C#N)cc12")
        assert "[nH]" in tokens
        assert "#" in tokens
        assert "".join(tokens) == "CNC.C1(=O)CCCC1Cc1c[nH]c2ccc(C#N)cc12"

    def test_percent_ring_closure_is_one_token(self):
        assert tokenize_smiles("C%12CC%12") == ["C", "%12", "C", "C", "%12"]

    def test_two_letter_halogens(self):
        assert tokenize_smiles("ClBr") == ["Cl", "Br"]

    def test_unknown_character_position(self):
        with pytest.raises(TokenizeError) as err:
            tokenize_smiles("CCxCC")
        assert err.value.position == 2

    def test_empty_rejected(self):
        with pytest.raises(TokenizeError):
            tokenize_smiles("")

    def test_partition_property(self, smiles_corpus):
        for s in smiles_corpus:
            assert "".join(tokenize_smiles(s)) == s


class TestTokenizeResidues:
    def test_protein(self):
        assert tokenize_residues("QQYSNYPWT", "protein") == list("QQYSNYPWT")

    def test_dna(self):
        assert tokenize_residues("ATGC", "dna") == ["A", "T", "G", "C"]

    def test_rna_rejects_t(self):
        with pytest.raises(TokenizeError) as err:
            tokenize_residues("ATGC", "rna")
        assert err.value.position == 1

    def test_length_preserved(self):
        for seq in ("A", "ACGT", "MKLVFF"):
            domain = "dna" if set(seq) <= set("ACGT") else "protein"
            assert len(tokenize_residues(seq, domain)) == len(seq)

    def test_non_iupac_protein_letter_warns(self):
        with pytest.warns(UserWarning):
            tokenize_residues("MKXB", "protein")


class TestTokenizeNumber:
    def test_negative(self):
        assert tokenize_number("-3.1416") == ["-", "3", ".", "1", "4", "1", "6"]

    def test_zero(self):
        assert tokenize_number("0.0000") == ["0", ".", "0", "0", "0", "0"]

    def test_wrong_precision(self):
        with pytest.raises(PrecisionError):
            tokenize_number("1.23")

    def test_no_fraction(self):
        with pytest.raises(PrecisionError):
            tokenize_number("12")


class TestWrapDetokenize:
    def test_benzene_golden(self):
        ts = wrap("mol", tokenize_smiles("c1ccccc1"))
        assert detokenize(ts) == "<mol>c1ccccc1</mol>"

    def test_domain_examples_round_trip(self):
        cases = [
            ("dna", "CCCAGAGCGGGCCTGTC"),
            ("rna", "AGGGGACAAACCUUCAUCCA"),
            ("protein", "QQYSNYPWT"),
            ("antibody", "QQYSNYPWT"),
        ]
        for tag, payload in cases:
            domain = "protein" if tag in ("protein", "antibody") else tag
            ts = wrap(tag, tokenize_residues(payload, domain))
            assert detokenize(ts) == f"<{tag}>{payload}</{tag}>"

    def test_reactant_wrap(self):
        s = "CNC.C1(=O)CCCC1Cc1c[nH]c2ccc(C#N)cc12"
        ts = wrap("reactant", tokenize_smiles(s))
        assert detokenize(ts) == f"<reactant>{s}</reactant>"

    def test_unbalanced_raises(self):
        ts = TaggedSequence(tokens=[("<mol>", "mol"), ("C", "mol")])
        with pytest.raises(StructureError):
            detokenize(ts)

    def test_nested_entities_rejected(self):
        ts = TaggedSequence(
            tokens=[("<mol>", "mol"), ("<dna>", "dna"), ("</dna>", "dna"), ("</mol>", "mol")]
        )
        with pytest.raises(StructureError):
            detokenize(ts)

    def test_parse_tagged_round_trip(self):
        ts = wrap("mol", tokenize_smiles("CCO"))
        rebuilt = parse_tagged(ts.token_strings())
        assert rebuilt.tokens == ts.tokens
        assert rebuilt.spans == ts.spans


@given(st.text(alphabet="ACGT", min_size=1, max_size=80))
def test_dna_round_trip_property(seq):
    ts = wrap("dna", tokenize_residues(seq, "dna"))
    assert detokenize(ts) == f"<dna>{seq}</dna>"


@given(st.text(alphabet="ACDEFGHIKLMNPQRSTVWY", min_size=1, max_size=80))
def test_protein_round_trip_property(seq):
    ts = wrap("protein", tokenize_residues(seq, "protein"))
    assert detokenize(ts) == f"<protein>{seq}</protein>"


def test_generated_smiles_round_trip():
    rng = random.Random(20240809)
    for _ in range(300):
        s = random_smiles(rng)
        ts = wrap("mol", tokenize_smiles(s))
        assert detokenize(ts) == f"<mol>{s}</mol>"
