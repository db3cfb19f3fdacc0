"""Multi-domain vocabulary with special tokens and a freeze partition.

The merged table keeps the base text tokens at their original positions and
appends domain tokens after them, in the fixed domain order mol, protein,
material, dna, rna, then the remaining special tokens.  Token identity is
``(domain, token)``: the same string may appear in several domains (``C`` is
a SMILES atom, a protein residue, and a DNA base) and is disambiguated by
context at encode time.

The space-group tokens ``<sg>``/``<sg1>..<sg230>`` and ``<coord>`` travel
with the material alphabet, so they exist exactly when the material domain
is enabled.

File format (UTF-8 text)::

    #naturelm-vocab v1 base=<N>
    <id>\\t<domain>\\t<special:0|1>\\t<token>

with tab, newline, and backslash in the token field escaped as ``\\t``,
``\\n``, ``\\\\``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable

from .errors import ParseError, ToolkitError
from .periodic import ELEMENTS
from .tok import ENTITY_TAGS, close_token, open_token

DOMAIN_ORDER = ("mol", "protein", "material", "dna", "rna")

PAD_TOKEN = "<pad>"
EOT_TOKEN = "<eot>"

SG_MARKER = "<sg>"
COORD_MARKER = "<coord>"

VOCAB_HEADER_PREFIX = "#naturelm-vocab v1 base="


class DuplicateToken(ToolkitError):
    """The same token string occurs twice within one domain."""


def sg_token(n: int) -> str:
    return f"<sg{n}>"


def boundary_tokens() -> list[str]:
    """All open/close boundary pairs, in entity-tag order."""
    out = []
    for tag in ENTITY_TAGS:
        out.append(open_token(tag))
        out.append(close_token(tag))
    return out


def material_special_tokens() -> list[str]:
    return [SG_MARKER] + [sg_token(n) for n in range(1, 231)] + [COORD_MARKER]


def special_token_set() -> frozenset[str]:
    specials = set(boundary_tokens())
    specials.update(material_special_tokens())
    specials.update((PAD_TOKEN, EOT_TOKEN))
    return frozenset(specials)


_SPECIALS = special_token_set()


@dataclass(frozen=True)
class VocabEntry:
    token: str
    id: int
    domain: str
    special: bool


@dataclass(frozen=True)
class FreezePartition:
    """Disjoint id ranges: base tokens stay frozen, new tokens train."""

    frozen_ids: range
    trainable_ids: range


class Vocabulary:
    """Immutable merged token table; safe to share across threads."""

    def __init__(self, entries: Iterable[VocabEntry], base_size: int):
        self.entries: tuple[VocabEntry, ...] = tuple(entries)
        self.base_size = base_size
        self._by_key: dict[tuple[str, str], int] = {}
        for e in self.entries:
            if e.id != len(self._by_key):
                raise ValueError(f"token ids not dense at {e.id}")
            key = (e.domain, e.token)
            if key in self._by_key:
                raise DuplicateToken(f"{e.token!r} duplicated in domain {e.domain}")
            self._by_key[key] = e.id

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.base_size == other.base_size
            and self.entries == other.entries
        )

    @property
    def domain_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for e in self.entries:
            counts[e.domain] = counts.get(e.domain, 0) + 1
        return counts

    def lookup(self, domain: str, token: str) -> int:
        """Id of a token in a domain; specials resolve from any domain."""
        key = (domain, token)
        if key in self._by_key:
            return self._by_key[key]
        if token in _SPECIALS and ("special", token) in self._by_key:
            return self._by_key[("special", token)]
        if (
            token in _SPECIALS
            and domain != "material"
            and ("material", token) in self._by_key
        ):
            return self._by_key[("material", token)]
        raise KeyError(f"token {token!r} not in domain {domain!r}")

    def token(self, token_id: int) -> str:
        return self.entries[token_id].token


def build_vocab(
    base_tokens: list[str], domain_alphabets: dict[str, list[str]]
) -> Vocabulary:
    """Merge base text tokens, domain alphabets, and special tokens.

    Base tokens keep their positions; domains append in the fixed order
    mol, protein, material, dna, rna; remaining specials come last.
    """
    if not base_tokens:
        raise ValueError("base_tokens must be non-empty")
    unknown = set(domain_alphabets) - set(DOMAIN_ORDER)
    if unknown:
        raise ValueError(f"unknown domains: {sorted(unknown)}")

    entries: list[VocabEntry] = []
    seen_in_domain: dict[str, set[str]] = {}

    def add(token: str, domain: str, special: bool) -> None:
        seen = seen_in_domain.setdefault(domain, set())
        if token in seen:
            raise DuplicateToken(f"{token!r} duplicated in domain {domain}")
        seen.add(token)
        entries.append(VocabEntry(token, len(entries), domain, special))

    for token in base_tokens:
        add(token, "text", False)

    for domain in DOMAIN_ORDER:
        if domain not in domain_alphabets:
            continue
        alphabet = list(domain_alphabets[domain])
        if domain == "material":
            # Space-group and coordinate markers ride with the material
            # alphabet; append any the caller's alphabet left out.
            present = set(alphabet)
            alphabet.extend(
                t for t in material_special_tokens() if t not in present
            )
        for token in alphabet:
            add(token, domain, token in _SPECIALS)

    covered = {e.token for e in entries if e.special}
    for token in boundary_tokens() + [PAD_TOKEN, EOT_TOKEN]:
        if token not in covered:
            add(token, "special", True)

    return Vocabulary(entries, base_size=len(base_tokens))


def freeze_partition(v: Vocabulary) -> FreezePartition:
    """Stage-1 split: base ids stay frozen, appended ids are trainable."""
    return FreezePartition(
        frozen_ids=range(0, v.base_size),
        trainable_ids=range(v.base_size, len(v)),
    )


def _escape(token: str) -> str:
    return token.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(field: str, line_no: int) -> str:
    out = []
    i = 0
    while i < len(field):
        ch = field[i]
        if ch == "\\":
            if i + 1 >= len(field):
                raise ParseError("dangling escape in token field", line_no)
            nxt = field[i + 1]
            if nxt == "t":
                out.append("\t")
            elif nxt == "n":
                out.append("\n")
            elif nxt == "\\":
                out.append("\\")
            else:
                raise ParseError(f"bad escape \\{nxt}", line_no)
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def save_vocab(v: Vocabulary, fh: IO[str]) -> None:
    fh.write(f"{VOCAB_HEADER_PREFIX}{v.base_size}\n")
    for e in v.entries:
        fh.write(f"{e.id}\t{e.domain}\t{1 if e.special else 0}\t{_escape(e.token)}\n")


def load_vocab(fh: IO[str]) -> Vocabulary:
    header = fh.readline().rstrip("\n")
    if not header.startswith(VOCAB_HEADER_PREFIX):
        raise ParseError(f"bad header {header!r}", 1)
    try:
        base_size = int(header[len(VOCAB_HEADER_PREFIX):])
    except ValueError:
        raise ParseError(f"bad base size in header {header!r}", 1) from None

    entries: list[VocabEntry] = []
    seen_ids: set[int] = set()
    for line_no, raw in enumerate(fh, start=2):
        line = raw.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ParseError(f"expected 4 tab-separated fields, got {len(parts)}", line_no)
        id_field, domain, special_field, token_field = parts
        try:
            token_id = int(id_field)
        except ValueError:
            raise ParseError(f"bad id {id_field!r}", line_no) from None
        if token_id in seen_ids:
            raise ParseError(f"duplicate id {token_id}", line_no)
        seen_ids.add(token_id)
        if token_id != len(entries):
            raise ParseError(f"ids not dense: expected {len(entries)}, got {token_id}", line_no)
        if special_field not in ("0", "1"):
            raise ParseError(f"bad special flag {special_field!r}", line_no)
        entries.append(
            VocabEntry(
                _unescape(token_field, line_no),
                token_id,
                domain,
                special_field == "1",
            )
        )
    if base_size > len(entries):
        raise ParseError(f"base size {base_size} exceeds entry count {len(entries)}", 1)
    return Vocabulary(entries, base_size=base_size)


def _pad_tokens(prefix: str, n: int) -> list[str]:
    return [f"<{prefix}#{i}>" for i in range(n)]


def _mol_alphabet(size: int) -> list[str]:
    tokens: list[str] = []
    tokens += ["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"]
    tokens += ["b", "c", "n", "o", "s", "p"]
    tokens += list("()=#-+\\/:~@?*$.")
    tokens += [str(d) for d in range(10)]
    tokens += [f"%{n}" for n in range(10, 100)]
    tokens += ["[nH]", "[n+]", "[n-]", "[nH+]", "[o+]", "[s+]", "[cH-]", "[se]", "[te]"]
    tokens += ["[C@H]", "[C@@H]", "[C@]", "[C@@]", "[*]"] + [f"[*:{n}]" for n in range(1, 10)]
    for symbol in ELEMENTS:
        for form in (f"[{symbol}]", f"[{symbol}+]", f"[{symbol}-]", f"[{symbol}+2]",
                     f"[{symbol}-2]", f"[{symbol}+3]", f"[{symbol}H]", f"[{symbol}H2]",
                     f"[{symbol}H3]", f"[{symbol}H4]"):
            tokens.append(form)
            if len(tokens) >= size:
                return tokens[:size]
    tokens += _pad_tokens("mol", size - len(tokens))
    return tokens


def _material_alphabet(size: int) -> list[str]:
    tokens = list(ELEMENTS) + material_special_tokens() + [str(d) for d in range(10)]
    tokens += ["-", "."]
    if len(tokens) > size:
        raise ValueError(f"material alphabet needs at least {len(tokens)} slots")
    tokens += _pad_tokens("mat", size - len(tokens))
    return tokens


def _nucleotide_alphabet(bases: str, prefix: str, size: int) -> list[str]:
    tokens = list(bases)
    if len(tokens) > size:
        raise ValueError(f"{prefix} alphabet needs at least {len(tokens)} slots")
    tokens += _pad_tokens(prefix, size - len(tokens))
    return tokens


def default_alphabets(
    mol_size: int = 1401,
    material_size: int = 396,
    dna_size: int = 16,
    rna_size: int = 16,
) -> dict[str, list[str]]:
    """Domain alphabets sized to the published per-domain vocabulary counts.

    The published counts come from corpus extraction and are not itemized
    anywhere, so the exact token inventory here is synthetic: a curated core
    per domain, padded with reserved tokens up to the configured sizes.
    """
    return {
        "mol": _mol_alphabet(mol_size),
        "protein": list("ABCDEFGHIJKLMNOPQRSTUVWXYZ"),
        "material": _material_alphabet(material_size),
        "dna": _nucleotide_alphabet("ACGTN", "dna", dna_size),
        "rna": _nucleotide_alphabet("ACGUN", "rna", rna_size),
    }
