"""Crystal composition/structure <-> 1D token codec, POSCAR ingestion, and
composition screening.

Sequence layouts
----------------
Composition form (used for generation metrics)::

    El El El ... <sgN>

Structure form (full 1D encoding)::

    El El ... <sg> <sgN> <coord> {9 lattice numbers} {3 numbers per atom}

Numbers are rendered with exactly four fraction digits (round half away
from zero) and tokenized character-wise, so ``-3.1416`` contributes the
seven tokens ``- 3 . 1 4 1 6``.  The fixed fraction width makes the flat
character stream uniquely decodable.  Fractional coordinates are wrapped
into [0, 1) before quantization (and re-wrapped if rounding lands on 1.0);
negative numbers therefore only occur in lattice rows.

Screening
---------
``smact_valid`` searches the embedded common-oxidation-state table for one
state per element such that the composition is charge-neutral and, ordered
by Pauling electronegativity, every cation sits strictly below every anion.
Both tables ship as TSV data files; the ``NATURE_SEQKIT_TABLES`` environment
variable points lookups at a replacement directory.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path

from .errors import ParseError, PrecisionError, ToolkitError
from .periodic import ELEMENT_SET
from .tok import tokenize_number
from .vocab import COORD_MARKER, SG_MARKER, sg_token

TABLES_ENV_VAR = "NATURE_SEQKIT_TABLES"


class BadSpaceGroup(ToolkitError):
    pass


class NoSpaceGroup(ToolkitError):
    pass


class UnknownElement(ToolkitError):
    pass


class WrongNumberCount(ToolkitError):
    pass


class Unsupported(ToolkitError):
    pass


class LengthMismatch(ToolkitError):
    pass


@dataclass(frozen=True)
class Composition:
    """Ordered (element, count) pairs; order is whatever the source used."""

    element_counts: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.element_counts:
            raise ValueError("composition needs at least one element")
        for symbol, count in self.element_counts:
            if symbol not in ELEMENT_SET:
                raise UnknownElement(f"unknown element {symbol!r}")
            if count < 1:
                raise ValueError(f"count for {symbol} must be >= 1")

    @staticmethod
    def from_pairs(pairs) -> "Composition":
        merged: dict[str, int] = {}
        order: list[str] = []
        for symbol, count in pairs:
            if symbol not in merged:
                order.append(symbol)
                merged[symbol] = 0
            merged[symbol] += count
        return Composition(tuple((s, merged[s]) for s in order))

    @property
    def elements(self) -> set[str]:
        return {s for s, _ in self.element_counts}

    @property
    def atom_count(self) -> int:
        return sum(c for _, c in self.element_counts)

    def flattened(self) -> list[str]:
        out: list[str] = []
        for symbol, count in self.element_counts:
            out.extend([symbol] * count)
        return out

    def sorted_key(self) -> tuple[tuple[str, int], ...]:
        """Order-independent identity for novelty/dedup keys."""
        return tuple(sorted(self.element_counts))


@dataclass(frozen=True)
class CrystalStructure:
    composition: Composition
    space_group: int
    lattice: tuple[float, ...]  # 9 values, row-major 3x3, Angstrom
    frac_coords: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        _check_space_group(self.space_group)
        if len(self.lattice) != 9:
            raise ValueError(f"lattice needs 9 values, got {len(self.lattice)}")
        if len(self.frac_coords) != self.composition.atom_count:
            raise ValueError(
                f"{self.composition.atom_count} atoms but "
                f"{len(self.frac_coords)} coordinate rows"
            )


@dataclass(frozen=True)
class SmactVerdict:
    valid: bool
    witness: dict[str, int] | None = None
    nearest_miss: tuple[dict[str, int], int] | None = None  # assignment, |residual|


def _check_space_group(sg: int) -> None:
    if not isinstance(sg, int) or not (1 <= sg <= 230):
        raise BadSpaceGroup(f"space group must be in 1..230, got {sg!r}")


def format_fixed4(x: float) -> str:
    """Render with exactly 4 fraction digits, ties away from zero."""
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def _wrap_unit(x: float) -> float:
    wrapped = x % 1.0
    return 0.0 if wrapped == 1.0 else wrapped


def _quantized_frac(x: float) -> float:
    q = float(format_fixed4(_wrap_unit(x)))
    return 0.0 if q >= 1.0 else q


def encode_composition(c: Composition, sg: int) -> list[str]:
    """Composition form: flattened element tokens then the sg token."""
    _check_space_group(sg)
    return c.flattened() + [sg_token(sg)]


def decode_composition(tokens: list[str]) -> tuple[Composition, int]:
    if not tokens:
        raise NoSpaceGroup("empty token stream")
    *element_tokens, last = tokens
    sg = _parse_sg_token(last)
    if sg is None:
        raise NoSpaceGroup(f"final token {last!r} is not a space-group token")
    if not element_tokens:
        raise ToolkitError("no element tokens before the space-group token")
    counts: dict[str, int] = {}
    order: list[str] = []
    for token in element_tokens:
        if token not in ELEMENT_SET:
            raise UnknownElement(f"unknown element token {token!r}")
        if token not in counts:
            order.append(token)
            counts[token] = 0
        counts[token] += 1
    composition = Composition(tuple((s, counts[s]) for s in order))
    _check_space_group(sg)
    return composition, sg


def _parse_sg_token(token: str) -> int | None:
    if token.startswith("<sg") and token.endswith(">"):
        body = token[3:-1]
        if body.isdigit():
            return int(body)
    return None


def encode_structure(s: CrystalStructure) -> list[str]:
    """Structure form with char-wise numbers; see module docstring."""
    tokens = s.composition.flattened()
    tokens += [SG_MARKER, sg_token(s.space_group), COORD_MARKER]
    numbers = [format_fixed4(v) for v in s.lattice]
    for coord in s.frac_coords:
        for v in coord:
            rendered = format_fixed4(_wrap_unit(v))
            # Rounding can push a wrapped coordinate up to 1.0000; wrap again.
            numbers.append("0.0000" if rendered == "1.0000" else rendered)
    for rendered in numbers:
        tokens.extend(tokenize_number(rendered))
    return tokens


def decode_structure(tokens: list[str]) -> CrystalStructure:
    """Inverse of :func:`encode_structure` on well-formed token streams."""
    idx = 0
    elements: list[str] = []
    while idx < len(tokens) and tokens[idx] in ELEMENT_SET:
        elements.append(tokens[idx])
        idx += 1
    if not elements:
        raise ToolkitError("structure stream has no element tokens")
    if idx >= len(tokens) or tokens[idx] != SG_MARKER:
        raise NoSpaceGroup(f"expected {SG_MARKER} after element tokens")
    idx += 1
    if idx >= len(tokens):
        raise NoSpaceGroup("stream ends before the space-group token")
    sg = _parse_sg_token(tokens[idx])
    if sg is None:
        raise NoSpaceGroup(f"expected a space-group token, got {tokens[idx]!r}")
    _check_space_group(sg)
    idx += 1
    if idx >= len(tokens) or tokens[idx] != COORD_MARKER:
        raise ToolkitError(f"expected {COORD_MARKER} after the space-group token")
    idx += 1

    numbers = _decode_numbers(tokens[idx:])
    expected = 9 + 3 * len(elements)
    if len(numbers) != expected:
        raise WrongNumberCount(
            f"expected {expected} numbers (9 lattice + 3 per atom), got {len(numbers)}"
        )
    lattice = tuple(numbers[:9])
    coords = tuple(
        (numbers[9 + 3 * i], numbers[10 + 3 * i], numbers[11 + 3 * i])
        for i in range(len(elements))
    )
    counts: dict[str, int] = {}
    order: list[str] = []
    atom_order: list[str] = []
    for el in elements:
        if el not in counts:
            order.append(el)
            counts[el] = 0
        counts[el] += 1
        atom_order.append(el)
    composition = Composition(tuple((s, counts[s]) for s in order))
    # Coordinates follow their atoms; group them by first-appearance element
    # order so they line up with the flattened composition.
    grouped: list[tuple[float, float, float]] = []
    for symbol in order:
        grouped.extend(c for el, c in zip(atom_order, coords) if el == symbol)
    return CrystalStructure(composition, sg, lattice, tuple(grouped))


def _decode_numbers(tokens: list[str]) -> list[float]:
    numbers: list[float] = []
    buf: list[str] = []
    frac_left: int | None = None  # digits still expected after the dot
    for token in tokens:
        if len(token) != 1 or token not in "0123456789.-":
            raise ToolkitError(f"unexpected token {token!r} in number stream")
        if token == "-" and buf:
            raise PrecisionError("sign inside a number")
        buf.append(token)
        if token == ".":
            if frac_left is not None:
                raise PrecisionError("second decimal point in a number")
            frac_left = 4
        elif frac_left is not None:
            frac_left -= 1
            if frac_left == 0:
                literal = "".join(buf)
                tokenize_number(literal)  # enforces the 4-digit contract
                numbers.append(float(literal))
                buf = []
                frac_left = None
    if buf:
        raise WrongNumberCount("token stream ends mid-number")
    return numbers


def parse_poscar(text: str, space_group: int = 1) -> CrystalStructure:
    """Read a VASP 5 POSCAR (Direct mode); the file carries no space group,
    so it is supplied separately."""
    lines = text.splitlines()
    if len(lines) < 8:
        raise ParseError("POSCAR needs at least 8 lines", len(lines) + 1)

    def fields(line_no: int) -> list[str]:
        return lines[line_no - 1].split()

    try:
        scale = float(fields(2)[0])
    except (IndexError, ValueError):
        raise ParseError("bad scale factor", 2) from None

    lattice: list[float] = []
    for line_no in (3, 4, 5):
        row = fields(line_no)
        if len(row) < 3:
            raise ParseError("lattice row needs 3 values", line_no)
        try:
            lattice.extend(scale * float(v) for v in row[:3])
        except ValueError:
            raise ParseError("bad lattice value", line_no) from None

    symbols = fields(6)
    if not symbols or any(s not in ELEMENT_SET for s in symbols):
        raise ParseError("element symbols line missing (VASP 5 format required)", 6)
    counts_fields = fields(7)
    try:
        counts = [int(v) for v in counts_fields]
    except ValueError:
        raise ParseError("bad atom count", 7) from None
    if len(counts) != len(symbols):
        raise ParseError(
            f"{len(symbols)} symbols but {len(counts)} counts", 7
        )

    mode_line = lines[7].strip()
    if not mode_line:
        raise ParseError("missing coordinate mode line", 8)
    mode = mode_line[0].lower()
    if mode in ("c", "k"):
        raise Unsupported("Cartesian coordinates are not supported")
    if mode == "s":
        raise Unsupported("selective dynamics is not supported")
    if mode != "d":
        raise ParseError(f"unrecognized coordinate mode {mode_line!r}", 8)

    n_atoms = sum(counts)
    coords: list[tuple[float, float, float]] = []
    for i in range(n_atoms):
        line_no = 9 + i
        if line_no > len(lines):
            raise ParseError(
                f"expected {n_atoms} coordinate rows, file ends after {i}", line_no
            )
        row = fields(line_no)
        if len(row) < 3:
            raise ParseError("coordinate row needs 3 values", line_no)
        try:
            coords.append((float(row[0]), float(row[1]), float(row[2])))
        except ValueError:
            raise ParseError("bad coordinate value", line_no) from None

    composition = Composition(tuple(zip(symbols, counts)))
    return CrystalStructure(composition, space_group, tuple(lattice), tuple(coords))


def quantize_structure(s: CrystalStructure) -> CrystalStructure:
    """The structure as the codec sees it: 4-decimal lattice, wrapped coords."""
    return CrystalStructure(
        s.composition,
        s.space_group,
        tuple(float(format_fixed4(v)) for v in s.lattice),
        tuple(
            tuple(_quantized_frac(v) for v in coord)  # type: ignore[misc]
            for coord in s.frac_coords
        ),
    )


def _tables_dir() -> Path | None:
    override = os.environ.get(TABLES_ENV_VAR)
    return Path(override) if override else None


def _load_table(name: str) -> dict[str, str]:
    directory = _tables_dir()
    if directory is not None:
        text = (directory / name).read_text(encoding="utf-8")
    else:
        text = resources.files("natureseq.data").joinpath(name).read_text("utf-8")
    table: dict[str, str] = {}
    for raw in text.splitlines():
        if not raw or raw.startswith("#"):
            continue
        symbol, _, value = raw.partition("\t")
        table[symbol.strip()] = value.strip()
    return table


# caches keyed by the override directory (None = packaged tables)
_oxidation_cache: tuple[Path | None, dict[str, tuple[int, ...]]] | None = None
_electronegativity_cache: tuple[Path | None, dict[str, float | None]] | None = None


def oxidation_states() -> dict[str, tuple[int, ...]]:
    global _oxidation_cache
    source = _tables_dir()
    if _oxidation_cache is None or _oxidation_cache[0] != source:
        raw = _load_table("oxidation_states.tsv")
        table = {
            symbol: tuple(int(v) for v in value.split(",")) if value else ()
            for symbol, value in raw.items()
        }
        _oxidation_cache = (source, table)
    return _oxidation_cache[1]


def pauling_electronegativity() -> dict[str, float | None]:
    global _electronegativity_cache
    source = _tables_dir()
    if _electronegativity_cache is None or _electronegativity_cache[0] != source:
        raw = _load_table("electronegativity.tsv")
        table = {
            symbol: float(value) if value else None for symbol, value in raw.items()
        }
        _electronegativity_cache = (source, table)
    return _electronegativity_cache[1]


def electronegativity_ordered(assignment: dict[str, int]) -> bool:
    """Every cation strictly less electronegative than every anion; elements
    without a tabulated value are exempt."""
    table = pauling_electronegativity()
    cations = [table[s] for s, q in assignment.items() if q > 0]
    anions = [table[s] for s, q in assignment.items() if q < 0]
    cations = [v for v in cations if v is not None]
    anions = [v for v in anions if v is not None]
    if not cations or not anions:
        return True
    return max(cations) < min(anions)


def smact_valid(c: Composition) -> SmactVerdict:
    """Charge-neutral oxidation-state assignment test with EN ordering."""
    states_table = oxidation_states()
    symbols = [s for s, _ in c.element_counts]
    counts = [n for _, n in c.element_counts]
    for symbol in symbols:
        if symbol not in states_table:
            raise UnknownElement(f"no oxidation-state data for {symbol!r}")

    if len(symbols) == 1:
        return SmactVerdict(True, witness={symbols[0]: 0})

    best_states: tuple[int, ...] | None = None
    best_residual = 0
    for states in itertools.product(*(states_table[s] for s in symbols)):
        residual = abs(sum(q * n for q, n in zip(states, counts)))
        if residual == 0:
            assignment = dict(zip(symbols, states))
            if electronegativity_ordered(assignment):
                return SmactVerdict(True, witness=assignment)
        if best_states is None or residual < best_residual:
            best_states = states
            best_residual = residual
    nearest = None
    if best_states is not None:
        nearest = (dict(zip(symbols, best_states)), best_residual)
    return SmactVerdict(False, nearest_miss=nearest)


def composition_precision(prompts: list[set[str]], gens: list[Composition | set[str]]) -> float:
    """Mean over records of |prompt elements covered by the generation| /
    |prompt elements|."""
    if len(prompts) != len(gens):
        raise LengthMismatch(f"{len(prompts)} prompts vs {len(gens)} generations")
    if not prompts:
        raise ValueError("no records")
    total = 0.0
    for prompt, gen in zip(prompts, gens):
        if not prompt:
            raise ValueError("prompt element set must be non-empty")
        gen_elements = gen.elements if isinstance(gen, Composition) else set(gen)
        total += len(prompt & gen_elements) / len(prompt)
    return total / len(prompts)
