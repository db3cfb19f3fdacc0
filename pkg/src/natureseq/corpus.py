"""Pre-training and post-training corpus construction.

Record flow: JSONL in, rendered token streams out, packed fixed-length rows
as binary.  Three input schemas are accepted (one object per line)::

    {"text": ..., "spans": [{"start":..., "end":..., "domain":..., "payload":...}]}
    {"instruction": ..., "response": ..., "task": ...}
    {"prompt": ..., "accepted": ..., "rejected": ...}

Instruction rendering is byte-exact
``Instruction: {instruction}\\n\\n\\nResponse: {response}`` and the loss mask
is 1 exactly on the response payload tokens plus the terminal end-of-text
token, never on the ``Response: `` literal.

Packed binary layout (documented here, versioned in the sidecar manifest):
each row is ``L`` little-endian uint32 token ids followed by ``ceil(L/8)``
mask bytes, LSB-first within each byte; rows are concatenated with nothing
in between.  The sidecar JSON manifest records the row length, row count,
pad id, and per-row document offsets.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import TokenizeError, ToolkitError
from .tok import (
    ENTITY_TAGS,
    TaggedSequence,
    text_chunk,
    tokenize_entity,
    wrap,
)
from .vocab import EOT_TOKEN

INSTRUCTION_PREFIX = "Instruction: "
RESPONSE_PREFIX = "Response: "
TEMPLATE_SEPARATOR = "\n\n\n"

_ENTITY_RE = re.compile(
    "<(" + "|".join(ENTITY_TAGS) + r")>(.*?)</\1>", flags=re.DOTALL
)

MANIFEST_VERSION = 1


class OverlappingSpans(ToolkitError):
    pass


class SpanOutOfBounds(ToolkitError):
    pass


class RecordTooLong(ToolkitError):
    def __init__(self, record_id: int, length: int, limit: int):
        super().__init__(f"record {record_id} has {length} tokens, limit {limit}")
        self.record_id = record_id


class DuplicateResponses(ToolkitError):
    pass


class ValidationError(ToolkitError):
    pass


@dataclass(frozen=True)
class EntitySpan:
    char_start: int
    char_end: int
    domain: str
    payload: str


@dataclass(frozen=True)
class InstructionRecord:
    instruction: str
    response: str
    task_tag: str = ""

    def __post_init__(self):
        if not self.instruction or not self.response:
            raise ValidationError("instruction and response must be non-empty")
        if TEMPLATE_SEPARATOR + RESPONSE_PREFIX in self.instruction:
            raise ValidationError(
                "instruction must not contain the template delimiter"
            )


@dataclass(frozen=True)
class PreferenceRecord:
    prompt: str
    accepted: str
    rejected: str

    def __post_init__(self):
        if not self.prompt or not self.accepted or not self.rejected:
            raise ValidationError("prompt and both responses must be non-empty")
        if self.accepted == self.rejected:
            raise DuplicateResponses("accepted and rejected responses are identical")


@dataclass
class PackedSequence:
    token_ids: list[int]
    loss_mask: list[int]
    doc_offsets: list[tuple[int, int, int]]  # (doc_id, start, end) within the row


@dataclass
class RenderedInstruction:
    text: str
    tokens: list[tuple[str, str]]
    loss_mask: list[int]

    def token_strings(self) -> list[str]:
        return [t for t, _ in self.tokens]


def build_interleaved(text: str, spans: Sequence[EntitySpan]) -> TaggedSequence:
    """Insert each span's wrapped entity right after its mention.

    The mention text is kept; the entity follows it separated by one space,
    matching the interleaved-literature convention.
    """
    ordered = sorted(spans, key=lambda s: (s.char_start, s.char_end))
    prev_end = 0
    for span in ordered:
        if not (0 <= span.char_start < span.char_end <= len(text)):
            raise SpanOutOfBounds(
                f"span [{span.char_start}, {span.char_end}) outside text of length {len(text)}"
            )
        if span.char_start < prev_end:
            raise OverlappingSpans(
                f"span starting at {span.char_start} overlaps the previous span"
            )
        prev_end = span.char_end

    seq = TaggedSequence()
    cursor = 0
    for span in ordered:
        seq.extend(text_chunk(text[cursor : span.char_end]))
        seq.extend(text_chunk(" "))
        seq.extend(wrap(span.domain, tokenize_entity(span.payload, span.domain)))
        cursor = span.char_end
    seq.extend(text_chunk(text[cursor:]))
    return seq


def mixed_tokenize(text: str) -> TaggedSequence:
    """Tokenize text that may embed boundary-delimited entities.

    Entity payloads use their domain tokenizer when it reproduces the
    payload exactly; otherwise the payload falls back to whitespace-run
    splitting so the token stream always concatenates back to the input.
    """
    seq = TaggedSequence()
    cursor = 0
    for match in _ENTITY_RE.finditer(text):
        seq.extend(text_chunk(text[cursor : match.start()]))
        tag, payload = match.group(1), match.group(2)
        try:
            tokens = tokenize_entity(payload, tag)
            if "".join(tokens) != payload:
                raise TokenizeError("lossy", 0)
            seq.extend(wrap(tag, tokens))
        except (TokenizeError, ToolkitError):
            entity = TaggedSequence()
            entity.tokens.append((f"<{tag}>", tag))
            entity.tokens.extend(
                (t, tag) for t in re.findall(r"\S+|\s+", payload)
            )
            entity.tokens.append((f"</{tag}>", tag))
            entity.spans.append((tag, 0, len(entity.tokens)))
            seq.extend(entity)
        cursor = match.end()
    seq.extend(text_chunk(text[cursor:]))
    return seq


def render_instruction(record: InstructionRecord) -> RenderedInstruction:
    """Template rendering with a response-only loss mask."""
    prefix = (
        INSTRUCTION_PREFIX
        + record.instruction
        + TEMPLATE_SEPARATOR
        + RESPONSE_PREFIX
    )
    prefix_tokens = mixed_tokenize(prefix)
    response_tokens = mixed_tokenize(record.response)
    tokens = list(prefix_tokens.tokens) + list(response_tokens.tokens)
    mask = [0] * len(prefix_tokens.tokens) + [1] * len(response_tokens.tokens)
    tokens.append((EOT_TOKEN, "special"))
    mask.append(1)
    return RenderedInstruction(prefix + record.response, tokens, mask)


def pack_pretrain(
    docs: Iterable[Sequence[int]], length: int, pad_id: int
) -> Iterator[PackedSequence]:
    """Greedy fixed-length packing; documents may span row boundaries.

    Every input token appears exactly once, in order; ``doc_offsets``
    reconstruct the original document boundaries losslessly.
    """
    if length < 2:
        raise ValueError("row length must be >= 2")
    row: list[int] = []
    offsets: list[tuple[int, int, int]] = []
    for doc_id, doc in enumerate(docs):
        if not doc:
            offsets.append((doc_id, len(row), len(row)))
            continue
        pos = 0
        while pos < len(doc):
            take = min(len(doc) - pos, length - len(row))
            offsets.append((doc_id, len(row), len(row) + take))
            row.extend(doc[pos : pos + take])
            pos += take
            if len(row) == length:
                yield PackedSequence(row, [1] * length, offsets)
                row, offsets = [], []
    if row or offsets:
        mask = [1] * len(row) + [0] * (length - len(row))
        row = row + [pad_id] * (length - len(row))
        yield PackedSequence(row, mask, offsets)


def pack_posttrain(
    records: Iterable[tuple[Sequence[int], Sequence[int]]],
    length: int,
    pad_id: int,
) -> Iterator[PackedSequence]:
    """One instruction-response record per row, right-padded, mask-padded 0."""
    if length < 2:
        raise ValueError("row length must be >= 2")
    for record_id, (ids, mask) in enumerate(records):
        if len(ids) != len(mask):
            raise ValidationError(f"record {record_id}: ids and mask lengths differ")
        if len(ids) > length:
            raise RecordTooLong(record_id, len(ids), length)
        pad = length - len(ids)
        yield PackedSequence(
            list(ids) + [pad_id] * pad,
            list(mask) + [0] * pad,
            [(record_id, 0, len(ids))],
        )


def unpack(rows: Iterable[PackedSequence]) -> list[list[int]]:
    """Invert packing exactly using the recorded document offsets."""
    docs: dict[int, list[int]] = {}
    for row in rows:
        for doc_id, start, end in row.doc_offsets:
            docs.setdefault(doc_id, []).extend(row.token_ids[start:end])
    return [docs[k] for k in sorted(docs)]


def encode_tagged(tokens: Sequence[tuple[str, str]], vocabulary) -> list[int]:
    """Map (token, domain) pairs to ids through a Vocabulary.

    Raises ``KeyError`` for tokens absent from their domain; text corpora
    must therefore be encoded against a vocabulary whose base covers them.
    """
    return [vocabulary.lookup(domain, token) for token, domain in tokens]


def make_preference_record(prompt: str, accepted: str, rejected: str) -> PreferenceRecord:
    return PreferenceRecord(prompt, accepted, rejected)


def preference_to_json(record: PreferenceRecord) -> str:
    return json.dumps(
        {"prompt": record.prompt, "accepted": record.accepted, "rejected": record.rejected},
        ensure_ascii=False,
    )


def preference_from_json(line: str) -> PreferenceRecord:
    obj = json.loads(line)
    return PreferenceRecord(obj["prompt"], obj["accepted"], obj["rejected"])


def instruction_from_json(line: str) -> InstructionRecord:
    obj = json.loads(line)
    return InstructionRecord(obj["instruction"], obj["response"], obj.get("task", ""))


def spans_from_json(line: str) -> tuple[str, list[EntitySpan]]:
    obj = json.loads(line)
    spans = [
        EntitySpan(s["start"], s["end"], s["domain"], s["payload"])
        for s in obj.get("spans", [])
    ]
    return obj["text"], spans


def _mask_bytes(length: int) -> int:
    return (length + 7) // 8


def write_packed(rows: Iterable[PackedSequence], length: int, pad_id: int,
                 data_fh: IO[bytes], manifest_fh: IO[str]) -> int:
    """Stream rows to the binary layout; returns the row count."""
    docs: list[list[tuple[int, int, int]]] = []
    count = 0
    for row in rows:
        if len(row.token_ids) != length:
            raise ValidationError(f"row {count} has length {len(row.token_ids)}")
        ids = np.asarray(row.token_ids, dtype="<u4")
        data_fh.write(ids.tobytes())
        bits = np.asarray(row.loss_mask, dtype=np.uint8)
        data_fh.write(np.packbits(bits, bitorder="little").tobytes())
        docs.append([list(t) for t in row.doc_offsets])  # type: ignore[arg-type]
        count += 1
    json.dump(
        {
            "version": MANIFEST_VERSION,
            "rows": count,
            "length": length,
            "pad_id": pad_id,
            "doc_offsets": docs,
        },
        manifest_fh,
    )
    return count


def read_packed(data_fh: IO[bytes], manifest_fh: IO[str]) -> list[PackedSequence]:
    manifest = json.load(manifest_fh)
    if manifest.get("version") != MANIFEST_VERSION:
        raise ValidationError(f"unsupported manifest version {manifest.get('version')!r}")
    length = manifest["length"]
    rows: list[PackedSequence] = []
    mask_bytes = _mask_bytes(length)
    row_bytes = 4 * length + mask_bytes
    blob = data_fh.read()
    if len(blob) != row_bytes * manifest["rows"]:
        raise ValidationError(
            f"expected {row_bytes * manifest['rows']} bytes, got {len(blob)}"
        )
    for r in range(manifest["rows"]):
        chunk = blob[r * row_bytes : (r + 1) * row_bytes]
        ids = np.frombuffer(chunk[: 4 * length], dtype="<u4").tolist()
        bits = np.unpackbits(
            np.frombuffer(chunk[4 * length :], dtype=np.uint8), bitorder="little"
        )[:length].tolist()
        offsets = [tuple(t) for t in manifest["doc_offsets"][r]]
        rows.append(PackedSequence(ids, bits, offsets))  # type: ignore[arg-type]
    return rows


def shard_bounds(n_items: int, shards: int) -> list[tuple[int, int]]:
    """Contiguous chunks so shard-parallel output equals serial output."""
    if shards < 1:
        raise ValueError("shards must be >= 1")
    per = (n_items + shards - 1) // shards
    return [(i, min(i + per, n_items)) for i in range(0, n_items, per)]
