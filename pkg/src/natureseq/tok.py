"""Domain tokenizers, boundary-token wrapping, and detokenization.

Entities from each scientific domain are tokenized with a domain-specific
rule and wrapped in an open/close boundary-token pair rendered in plain text
as ``<mol>...</mol>``, ``<protein>...</protein>``, etc.  Every tokenizer is a
partition of its input: concatenating the tokens reconstructs the input
byte-for-byte, so detokenization is a strict left inverse of tokenization.

SMILES strings are split with the standard atom-wise regular expression
(bracket atoms, Br/Cl, organic-subset atoms, ``%NN`` ring closures, and
bond/branch/charge/stereo punctuation)::

    (\\[[^\\]]+]|Br?|Cl?|N|O|S|P|F|I|b|c|n|o|s|p|\\(|\\)|\\.|=|#|-|\\+|\\\\|\\/|:|~|@|\\?|>>?|\\*|\\$|\\%[0-9]{2}|[0-9])

A character not consumed by the pattern is a hard error, never a silent
char-level fallback.  ``%NN`` ring closures are one token.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .errors import PrecisionError, StructureError, TokenizeError

SMILES_TOKEN_PATTERN = (
    r"(\[[^\]]+]|Br?|Cl?|N|O|S|P|F|I|b|c|n|o|s|p|\(|\)|\.|=|#|-|\+|\\|\/"
    r"|:|~|@|\?|>>?|\*|\$|\%[0-9]{2}|[0-9])"
)
_SMILES_RE = re.compile(SMILES_TOKEN_PATTERN)

PROTEIN_ALPHABET = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
DNA_ALPHABET = frozenset("ACGTN")
RNA_ALPHABET = frozenset("ACGUN")

RESIDUE_ALPHABETS = {
    "protein": PROTEIN_ALPHABET,
    "dna": DNA_ALPHABET,
    "rna": RNA_ALPHABET,
}

# Boundary-delimited entity tags and the domain used to tag their payload
# tokens.  Reaction and fragment tags carry SMILES; antibodies are proteins.
ENTITY_TAGS = (
    "mol",
    "protein",
    "material",
    "dna",
    "rna",
    "product",
    "reactant",
    "antibody",
    "fragA",
    "fragB",
)
PAYLOAD_DOMAIN = {
    "mol": "mol",
    "protein": "protein",
    "material": "material",
    "dna": "dna",
    "rna": "rna",
    "product": "mol",
    "reactant": "mol",
    "antibody": "protein",
    "fragA": "mol",
    "fragB": "mol",
}

_NUMBER_RE = re.compile(r"-?\d+\.\d{4}\Z")


def open_token(tag: str) -> str:
    return f"<{tag}>"


def close_token(tag: str) -> str:
    return f"</{tag}>"


_OPEN_TOKENS = {open_token(t): t for t in ENTITY_TAGS}
_CLOSE_TOKENS = {close_token(t): t for t in ENTITY_TAGS}


def tokenize_smiles(s: str) -> list[str]:
    """Split a SMILES string into atom-wise tokens.

    Raises :class:`TokenizeError` at the byte offset of the first character
    the pattern cannot consume.
    """
    if not s:
        raise TokenizeError("empty SMILES", 0)
    tokens = []
    pos = 0
    for match in _SMILES_RE.finditer(s):
        if match.start() != pos:
            raise TokenizeError(f"unexpected character {s[pos]!r}", pos)
        tokens.append(match.group(0))
        pos = match.end()
    if pos != len(s):
        raise TokenizeError(f"unexpected character {s[pos]!r}", pos)
    return tokens


IUPAC_AMINO_ACIDS = frozenset("ACDEFGHIKLMNPQRSTVWY")


def tokenize_residues(s: str, domain: str) -> list[str]:
    """One token per residue character, checked against the domain alphabet.

    Protein sequences may use any of the 26 uppercase letters; the ones
    outside the one-letter amino-acid code (B J O U X Z) are accepted with
    a warning.
    """
    if domain not in RESIDUE_ALPHABETS:
        raise ValueError(f"no residue alphabet for domain {domain!r}")
    if not s:
        raise TokenizeError("empty sequence", 0)
    alphabet = RESIDUE_ALPHABETS[domain]
    for i, ch in enumerate(s):
        if ch not in alphabet:
            raise TokenizeError(f"{ch!r} not in {domain} alphabet", i)
    if domain == "protein":
        odd = set(s) - IUPAC_AMINO_ACIDS
        if odd:
            warnings.warn(
                f"protein sequence uses non-IUPAC letters: {sorted(odd)}",
                stacklevel=2,
            )
    return list(s)


def tokenize_number(x: str) -> list[str]:
    """Character-wise tokens of a signed decimal with exactly 4 fraction digits."""
    if not _NUMBER_RE.match(x):
        raise PrecisionError(
            f"{x!r} is not a signed decimal with exactly 4 fraction digits"
        )
    return list(x)


def tokenize_entity(payload: str, tag: str) -> list[str]:
    """Tokenize an entity payload with the rule of its boundary tag."""
    domain = PAYLOAD_DOMAIN[tag]
    if domain == "mol":
        return tokenize_smiles(payload)
    if domain in ("protein", "dna", "rna"):
        return tokenize_residues(payload, domain)
    # Material payloads are already space-separated token streams.
    return payload.split(" ")


@dataclass
class TaggedSequence:
    """A token stream where every token carries a domain tag.

    ``spans`` records each boundary-delimited entity as
    ``(tag, start, end)`` with token indices covering the open and close
    boundary tokens, end exclusive.  Entities never nest.
    """

    tokens: list[tuple[str, str]] = field(default_factory=list)
    spans: list[tuple[str, int, int]] = field(default_factory=list)

    def token_strings(self) -> list[str]:
        return [t for t, _ in self.tokens]

    def extend(self, other: "TaggedSequence") -> None:
        offset = len(self.tokens)
        self.tokens.extend(other.tokens)
        self.spans.extend((d, s + offset, e + offset) for d, s, e in other.spans)


def wrap(tag: str, tokens: list[str]) -> TaggedSequence:
    """Enclose domain tokens in the tag's boundary pair."""
    if tag not in ENTITY_TAGS:
        raise ValueError(f"unknown entity tag {tag!r}")
    domain = PAYLOAD_DOMAIN[tag]
    seq = TaggedSequence()
    seq.tokens.append((open_token(tag), tag))
    seq.tokens.extend((t, domain) for t in tokens)
    seq.tokens.append((close_token(tag), tag))
    seq.spans.append((tag, 0, len(seq.tokens)))
    return seq


def text_chunk(text: str) -> TaggedSequence:
    """Plain text as a sequence of whitespace-run and word tokens."""
    seq = TaggedSequence()
    seq.tokens.extend((t, "text") for t in re.findall(r"\S+|\s+", text))
    return seq


def detokenize(ts: TaggedSequence) -> str:
    """Concatenate the token stream back into text.

    Verifies that boundary tokens pair up and never nest; raises
    :class:`StructureError` otherwise.
    """
    open_tag: str | None = None
    for token, _ in ts.tokens:
        if token in _OPEN_TOKENS:
            if open_tag is not None:
                raise StructureError(
                    f"{token} opened inside <{open_tag}> entity"
                )
            open_tag = _OPEN_TOKENS[token]
        elif token in _CLOSE_TOKENS:
            tag = _CLOSE_TOKENS[token]
            if open_tag != tag:
                raise StructureError(f"unmatched {token}")
            open_tag = None
    if open_tag is not None:
        raise StructureError(f"<{open_tag}> never closed")
    return "".join(t for t, _ in ts.tokens)


def parse_tagged(tokens: list[str]) -> TaggedSequence:
    """Rebuild a TaggedSequence from a flat token list.

    Payload tokens inside a boundary pair are tagged with the entity's
    domain; everything outside is text.  Used by the CLI and service to
    accept token streams over the wire.
    """
    seq = TaggedSequence()
    open_tag: str | None = None
    span_start = 0
    for idx, token in enumerate(tokens):
        if token in _OPEN_TOKENS:
            if open_tag is not None:
                raise StructureError(f"{token} opened inside <{open_tag}> entity")
            open_tag = _OPEN_TOKENS[token]
            span_start = idx
            seq.tokens.append((token, open_tag))
        elif token in _CLOSE_TOKENS:
            tag = _CLOSE_TOKENS[token]
            if open_tag != tag:
                raise StructureError(f"unmatched {token}")
            seq.tokens.append((token, tag))
            seq.spans.append((tag, span_start, idx + 1))
            open_tag = None
        else:
            domain = PAYLOAD_DOMAIN[open_tag] if open_tag else "text"
            seq.tokens.append((token, domain))
    if open_tag is not None:
        raise StructureError(f"<{open_tag}> never closed")
    return seq
