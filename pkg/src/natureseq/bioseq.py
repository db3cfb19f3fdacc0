"""Central-dogma operations and crRNA validation.

Nucleotide sequences are strict: DNA over ``ACGT``, RNA over ``ACGU``.
Guide validation additionally accepts the ambiguity code ``N`` in the
*target* (an ``N`` never matches inside the protospacer but satisfies the
``N`` position of the NGG PAM), and accepts guides written with either
``T`` or ``U`` since only the guide's DNA form matters for matching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import IO, Iterator

from .errors import ToolkitError
from .tok import TaggedSequence, tokenize_residues, wrap

_DNA_COMPLEMENT = str.maketrans("ACGTN", "TGCAN")

_BASES = "TCAG"
_AMINO_ACIDS = "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG"
CODON_TABLE = {
    b1 + b2 + b3: _AMINO_ACIDS[i * 16 + j * 4 + k]
    for i, b1 in enumerate(_BASES)
    for j, b2 in enumerate(_BASES)
    for k, b3 in enumerate(_BASES)
}

GUIDE_MIN_LEN = 17
GUIDE_MAX_LEN = 24


class EmptySequence(ToolkitError):
    pass


class OutOfBounds(ToolkitError):
    pass


class NotCodonAligned(ToolkitError):
    pass


class InternalStopCodon(ToolkitError):
    """A stop codon occurs before the final codon of an annotated CDS."""


@dataclass(frozen=True)
class NucleotideSeq:
    bases: str
    kind: str  # "dna" | "rna"

    def __post_init__(self):
        if self.kind not in ("dna", "rna"):
            raise ValueError(f"kind must be dna or rna, got {self.kind!r}")
        if not self.bases:
            raise EmptySequence("empty nucleotide sequence")
        tokenize_residues(self.bases, self.kind)
        if "N" in self.bases:
            raise ValueError("ambiguity codes are only accepted in guide targets")

    def __len__(self) -> int:
        return len(self.bases)


@dataclass(frozen=True)
class CrRNAVerdict:
    valid: bool
    failures: frozenset[str]  # subset of LengthOutOfRange/NoTargetMatch/NoPAM
    match_position: int | None = None  # offset on the matched strand, 5'->3'
    strand: str | None = None  # "+" | "-"


def reverse_complement(d: NucleotideSeq) -> NucleotideSeq:
    if d.kind != "dna":
        raise ValueError("reverse_complement is defined on DNA")
    return NucleotideSeq(_rc(d.bases), "dna")


def _rc(bases: str) -> str:
    return bases.translate(_DNA_COMPLEMENT)[::-1]


def transcribe(d: NucleotideSeq) -> NucleotideSeq:
    if d.kind != "dna":
        raise ValueError("transcribe is defined on DNA")
    return NucleotideSeq(d.bases.replace("T", "U"), "rna")


def translate(n: NucleotideSeq, frame: int = 0) -> str:
    """Standard-table translation from ``frame``; stops at the first stop
    codon (not emitted); a trailing partial codon is ignored."""
    if frame not in (0, 1, 2):
        raise ValueError("frame must be 0, 1, or 2")
    bases = n.bases.replace("U", "T")
    if len(bases) < frame + 3:
        raise EmptySequence(f"no full codon at frame {frame}")
    out = []
    for i in range(frame, len(bases) - 2, 3):
        aa = CODON_TABLE[bases[i : i + 3]]
        if aa == "*":
            break
        out.append(aa)
    return "".join(out)


def _guide_dna_form(guide) -> str:
    bases = guide.bases if isinstance(guide, NucleotideSeq) else str(guide)
    if not bases:
        raise EmptySequence("empty guide")
    bases = bases.upper().replace("U", "T")
    if not re.fullmatch(r"[ACGT]+", bases):
        raise ValueError(f"guide contains non-nucleotide characters: {bases!r}")
    return bases


def _target_strands(target) -> tuple[str, str]:
    bases = target.bases if isinstance(target, NucleotideSeq) else str(target)
    bases = bases.upper()
    if not re.fullmatch(r"[ACGTN]+", bases):
        raise ValueError("target must be DNA (ACGT, ambiguity code N allowed)")
    return bases, _rc(bases)


def _pam_follows(strand: str, pam_start: int) -> bool:
    # NGG immediately 3' of the protospacer; the N position allows any base
    # including the target's own ambiguity code, the two Gs are literal.
    pam = strand[pam_start : pam_start + 3]
    return len(pam) == 3 and pam[1] == "G" and pam[2] == "G"


def _scan_strand(strand: str, probe: str) -> tuple[bool, int | None]:
    """(matched anywhere, first offset whose match has a PAM)."""
    matched = False
    start = strand.find(probe)
    while start != -1:
        matched = True
        if _pam_follows(strand, start + len(probe)):
            return True, start
        start = strand.find(probe, start + 1)
    return matched, None


def validate_crRNA(target, guide) -> CrRNAVerdict:
    """Check the three guide criteria: 17-24 nt, target match, NGG PAM.

    Both strands are searched; ``match_position`` is the protospacer start
    on the reported strand's own 5'->3' coordinates (the minus strand is the
    reverse complement of the target).
    """
    probe = _guide_dna_form(guide)
    plus, minus = _target_strands(target)

    failures: set[str] = set()
    if not (GUIDE_MIN_LEN <= len(probe) <= GUIDE_MAX_LEN):
        failures.add("LengthOutOfRange")

    plus_matched, plus_hit = _scan_strand(plus, probe)
    minus_matched, minus_hit = _scan_strand(minus, probe)

    if not (plus_matched or minus_matched):
        failures.add("NoTargetMatch")
    elif plus_hit is None and minus_hit is None:
        failures.add("NoPAM")

    if failures:
        return CrRNAVerdict(False, frozenset(failures))
    if plus_hit is not None:
        return CrRNAVerdict(True, frozenset(), plus_hit, "+")
    return CrRNAVerdict(True, frozenset(), minus_hit, "-")


def link_dna_protein(d: NucleotideSeq, cds: tuple[int, int, str]) -> TaggedSequence:
    """Replace an annotated CDS with its protein, keeping the DNA flanks.

    ``cds`` is (start, end, strand) with a half-open [start, end) range on
    the plus strand; minus-strand ranges are reverse-complemented before
    translation.  A stop codon is accepted only as the final codon.
    """
    if d.kind != "dna":
        raise ValueError("link_dna_protein is defined on DNA")
    start, end, strand = cds
    if strand not in ("+", "-"):
        raise ValueError(f"strand must be '+' or '-', got {strand!r}")
    if not (0 <= start < end <= len(d.bases)):
        raise OutOfBounds(f"cds [{start}, {end}) outside sequence of length {len(d.bases)}")
    segment = d.bases[start:end]
    if len(segment) % 3 != 0:
        raise NotCodonAligned(f"cds length {len(segment)} is not a multiple of 3")
    if strand == "-":
        segment = _rc(segment)

    protein = []
    n_codons = len(segment) // 3
    for c in range(n_codons):
        aa = CODON_TABLE[segment[3 * c : 3 * c + 3]]
        if aa == "*":
            if c != n_codons - 1:
                raise InternalStopCodon(f"stop codon at codon {c} of {n_codons}")
            break
        protein.append(aa)

    seq = TaggedSequence()
    seq.extend(wrap("dna", list(d.bases[:start])))
    seq.extend(wrap("protein", protein))
    seq.extend(wrap("dna", list(d.bases[end:])))
    return seq


def read_fasta(fh: IO[str]) -> Iterator[tuple[str, str]]:
    """Yield (header, sequence) records; sequences may be line-wrapped."""
    header: str | None = None
    chunks: list[str] = []
    for raw in fh:
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            if header is not None:
                yield header, "".join(chunks)
            header = line[1:].strip()
            chunks = []
        else:
            if header is None:
                raise ToolkitError("FASTA data before the first '>' header")
            chunks.append(line)
    if header is not None:
        yield header, "".join(chunks)
