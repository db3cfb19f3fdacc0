from __future__ import annotations

import itertools
import random

import pytest

from natureseq.errors import ParseError
from natureseq.matcodec import (
    BadSpaceGroup,
    Composition,
    CrystalStructure,
    LengthMismatch,
    NoSpaceGroup,
    SmactVerdict,
    UnknownElement,
    Unsupported,
    WrongNumberCount,
    composition_precision,
    decode_composition,
    decode_structure,
    electronegativity_ordered,
    encode_composition,
    encode_structure,
    format_fixed4,
    oxidation_states,
    parse_poscar,
    quantize_structure,
    smact_valid,
)

PANEL = [
    "Li", "Na", "K", "Mg", "Ca", "Ti", "Mn", "Fe", "Cu", "Zn",
    "Al", "Si", "C", "N", "O", "S", "F", "Cl", "Se", "Sn",
]


def brute_force_smact(comp: Composition) -> bool:
    """Independent enumerator over the same tables."""
    table = oxidation_states()
    symbols = [s for s, _ in comp.element_counts]
    if len(symbols) == 1:
        return True
    counts = dict(comp.element_counts)
    for states in itertools.product(*(table[s] for s in symbols)):
        assignment = dict(zip(symbols, states))
        if sum(q * counts[s] for s, q in assignment.items()) != 0:
            continue
        if electronegativity_ordered(assignment):
            return True
    return False


class TestComposition:
    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            Composition((("Xx", 1),))

    def test_nonpositive_count(self):
        with pytest.raises(ValueError):
            Composition((("Fe", 0),))

    def test_flatten(self):
        comp = Composition((("Li", 2), ("O", 3)))
        assert comp.flattened() == ["Li", "Li", "O", "O", "O"]


class TestCompositionCodec:
    def test_encode_form(self):
        tokens = encode_composition(Composition((("Li", 2), ("O", 3))), 123)
        assert tokens == ["Li", "Li", "O", "O", "O", "<sg123>"]

    def test_paper_response_example(self):
        comp = Composition(
            (("Li", 4), ("Ti", 3), ("Mn", 2), ("Fe", 3), ("O", 14))
        )
        tokens = encode_composition(comp, 8)
        assert tokens[:4] == ["Li"] * 4
        assert tokens.count("O") == 14
        assert tokens[-1] == "<sg8>"

    def test_bad_space_group(self):
        with pytest.raises(BadSpaceGroup):
            encode_composition(Composition((("Fe", 1),)), 231)
        with pytest.raises(BadSpaceGroup):
            encode_composition(Composition((("Fe", 1),)), 0)

    def test_decode_example(self):
        comp, sg = decode_composition(["Se", "Se", "Pd", "Sc", "<sg164>"])
        assert comp.element_counts == (("Se", 2), ("Pd", 1), ("Sc", 1))
        assert sg == 164

    def test_decode_non_contiguous(self):
        comp, sg = decode_composition(["A" if False else "Fe", "O", "Fe", "<sg1>"])
        assert comp.element_counts == (("Fe", 2), ("O", 1))

    def test_no_space_group(self):
        with pytest.raises(NoSpaceGroup):
            decode_composition(["Fe", "O"])

    def test_unknown_token(self):
        with pytest.raises(UnknownElement):
            decode_composition(["Fe", "Qq", "<sg1>"])

    def test_round_trip_random(self):
        rng = random.Random(5)
        for _ in range(100):
            n = rng.randint(1, 5)
            symbols = rng.sample(PANEL, n)
            comp = Composition(tuple((s, rng.randint(1, 9)) for s in symbols))
            sg = rng.randint(1, 230)
            assert decode_composition(encode_composition(comp, sg)) == (comp, sg)


class TestStructureCodec:
    def test_minimal_cubic(self):
        s = CrystalStructure(
            Composition((("Po", 1),)),
            1,
            (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            ((0.0, 0.0, 0.0),),
        )
        tokens = encode_structure(s)
        assert tokens[:4] == ["Po", "<sg>", "<sg1>", "<coord>"]
        numbers = "".join(tokens[4:])
        assert numbers.startswith("1.00000.00000.0000")
        assert decode_structure(tokens) == s

    def test_number_quantization(self):
        assert format_fixed4(7.1831247561033589) == "7.1831"
        assert format_fixed4(-1.4245311887791383) == "-1.4245"
        assert format_fixed4(0.6666666666666643) == "0.6667"
        assert format_fixed4(0.00005) == "0.0001"  # ties away from zero

    def test_coordinate_wrap(self):
        s = CrystalStructure(
            Composition((("Fe", 1),)),
            2,
            (1.0,) * 9,
            ((0.99999, -0.25, 1.25),),
        )
        decoded = decode_structure(encode_structure(s))
        assert decoded.frac_coords[0] == (0.0, 0.75, 0.25)

    def test_fixed_point_random(self):
        rng = random.Random(17)
        for _ in range(50):
            n_el = rng.randint(1, 4)
            symbols = rng.sample(PANEL, n_el)
            comp = Composition(tuple((s, rng.randint(1, 4)) for s in symbols))
            lattice = tuple(rng.uniform(-10, 10) for _ in range(9))
            coords = tuple(
                (rng.random(), rng.random(), rng.random())
                for _ in range(comp.atom_count)
            )
            s = CrystalStructure(comp, rng.randint(1, 230), lattice, coords)
            once = decode_structure(encode_structure(s))
            assert once == quantize_structure(s)
            assert decode_structure(encode_structure(once)) == once

    def test_wrong_number_count(self):
        s = CrystalStructure(
            Composition((("Fe", 1),)), 1, (1.0,) * 9, ((0.5, 0.5, 0.5),)
        )
        tokens = encode_structure(s)
        with pytest.raises(WrongNumberCount):
            decode_structure(tokens[:-1])

    def test_missing_sg(self):
        with pytest.raises(NoSpaceGroup):
            decode_structure(["Fe", "<coord>", "1", ".", "0", "0", "0", "0"])


class TestPoscar:
    def test_re3c_values_string_exact(self, re3c_text):
        s = parse_poscar(re3c_text, space_group=1)
        assert s.composition.element_counts == (("Re", 3), ("C", 1))
        assert s.lattice[0] == 7.1831247561033589
        assert s.lattice[4] == 1.4245311887791383
        assert s.lattice[7] == -1.4245311887791383
        assert s.frac_coords[0] == (0.5, 0.6666666666666643, 0.6666666666666643)
        assert s.frac_coords[1][0] == 0.8049243600558619
        assert s.frac_coords[3] == (0.0, 0.6666666666666643, 0.6666666666666643)

    def test_os3re_values_string_exact(self, os3re_text):
        s = parse_poscar(os3re_text, space_group=1)
        assert s.composition.element_counts == (("Re", 1), ("Os", 3))
        assert s.lattice[0] == 8.7432980292995008
        assert s.frac_coords[1][0] == 0.7492665073023750

    def test_re3c_encode_head(self, re3c_text):
        s = parse_poscar(re3c_text, space_group=1)
        tokens = encode_structure(s)
        assert tokens[:7] == ["Re", "Re", "Re", "C", "<sg>", "<sg1>", "<coord>"]
        assert "".join(tokens[7:13]) == "7.1831"

    def test_scale_factor_applied(self):
        text = "t\n 2.0\n1 0 0\n0 1 0\n0 0 1\nFe\n1\nDirect\n0.5 0.5 0.5\n"
        s = parse_poscar(text)
        assert s.lattice[0] == 2.0

    def test_counts_mismatch(self, re3c_text):
        broken = re3c_text.replace("     3     1", "     3     2")
        with pytest.raises(ParseError):
            parse_poscar(broken)

    def test_cartesian_unsupported(self, re3c_text):
        broken = re3c_text.replace("Direct", "Cartesian")
        with pytest.raises(Unsupported):
            parse_poscar(broken)

    def test_vasp4_rejected(self, re3c_text):
        lines = re3c_text.splitlines()
        del lines[5]  # drop the symbols line
        with pytest.raises(ParseError):
            parse_poscar("\n".join(lines))


class TestSmact:
    def test_nacl(self):
        verdict = smact_valid(Composition((("Na", 1), ("Cl", 1))))
        assert verdict.valid
        assert verdict.witness == {"Na": 1, "Cl": -1}

    def test_li4o8_invalid_with_diagnostic(self):
        verdict = smact_valid(Composition((("Li", 4), ("O", 8))))
        assert not verdict.valid
        assert verdict.nearest_miss is not None
        assignment, residual = verdict.nearest_miss
        assert residual == abs(4 * assignment["Li"] + 8 * assignment["O"])
        reduced = smact_valid(Composition((("Li", 1), ("O", 2))))
        assert not reduced.valid

    def test_hef_invalid(self):
        assert not smact_valid(Composition((("He", 1), ("F", 1)))).valid

    def test_single_element_neutral(self):
        verdict = smact_valid(Composition((("Fe", 3),)))
        assert verdict.valid and verdict.witness == {"Fe": 0}

    def test_electronegativity_ordering_enforced(self):
        # F-Cs: only -1 for F, +1 for Cs -> neutral and ordered (Cs 0.79 < F 3.98)
        assert smact_valid(Composition((("Cs", 1), ("F", 1)))).valid
        # H can be -1 against a more electronegative "cation"? ordering must hold:
        # ClF: Cl +1 / F -1 is neutral; EN(Cl)=3.16 < EN(F)=3.98 -> ordered, valid.
        assert smact_valid(Composition((("Cl", 1), ("F", 1)))).valid

    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            Composition((("Zz", 1), ("F", 1)))

    def test_element_without_states_cannot_balance(self):
        # Og is a real element but has no tabulated states
        assert not smact_valid(Composition((("Og", 1), ("F", 1)))).valid

    def test_matches_brute_force_small_panel(self):
        rng = random.Random(123)
        cases = []
        for n in (1, 2, 3):
            for _ in range(120):
                symbols = rng.sample(PANEL, n)
                cases.append(
                    Composition(tuple((s, rng.randint(1, 8)) for s in symbols))
                )
        for comp in cases:
            assert smact_valid(comp).valid == brute_force_smact(comp), comp


class TestTablesOverride:
    def test_env_var_redirects_lookups(self, tmp_path, monkeypatch):
        (tmp_path / "oxidation_states.tsv").write_text("Na\t1\nCl\t-1\n")
        (tmp_path / "electronegativity.tsv").write_text("Na\t0.93\nCl\t3.16\n")
        monkeypatch.setenv("NATURE_SEQKIT_TABLES", str(tmp_path))
        verdict = smact_valid(Composition((("Na", 1), ("Cl", 1))))
        assert verdict.valid
        with pytest.raises(UnknownElement):
            smact_valid(Composition((("Fe", 1), ("O", 1))))

    def test_default_tables_cover_every_element(self):
        from natureseq.periodic import ELEMENTS

        states = oxidation_states()
        assert set(states) == set(ELEMENTS)


class TestCompositionPrecision:
    def test_perfect(self):
        prompt = {"Li", "Ti", "Mn", "Fe", "O"}
        gen = Composition(
            (("Li", 4), ("Ti", 3), ("Mn", 2), ("Fe", 3), ("O", 14))
        )
        assert composition_precision([prompt], [gen]) == 1.0

    def test_partial(self):
        prompt = {"Li", "Ti", "Mn", "Fe", "O"}
        assert composition_precision([prompt], [{"Li", "O"}]) == pytest.approx(0.4)

    def test_empty_generation_scores_zero(self):
        assert composition_precision([{"Fe"}], [set()]) == 0.0

    def test_subset_prompts_score_one(self):
        rng = random.Random(1)
        prompts, gens = [], []
        for _ in range(20):
            prompt = set(rng.sample(PANEL, rng.randint(1, 4)))
            extra = set(rng.sample(PANEL, rng.randint(0, 4)))
            prompts.append(prompt)
            gens.append(prompt | extra)
        assert composition_precision(prompts, gens) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            composition_precision([{"Fe"}], [])
