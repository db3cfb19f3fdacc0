"""Generation-evaluation metrics.

Everything here is desk-computable from strings and precomputed property
columns; metrics that need an external oracle (docking, pLDDT, MFE, ehull
computation) consume their values as plain numbers.

Definitions worth pinning down:

* Uniqueness is the number of distinct canonical SMILES among the valid
  generations over the valid count.
* Residue recovery compares positions 1..L(ref); generated tails are
  ignored and missing positions score zero.
* Sequence identity for diversity clustering is matches / alignment length
  under a global alignment that maximizes matches, then alignment columns
  are minimized (diagonal-preferring traceback); a ``shorter``-denominator
  variant is available behind a flag.
* Novelty deduplicates the generated keys before the set difference, so the
  denominator is the number of distinct generations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ToolkitError
from .molgraph import canonical_form, check_smiles, parse_smiles, validate


class EmptyReference(ToolkitError):
    pass


class LengthMismatch(ToolkitError):
    pass


class DegenerateConstantInput(ToolkitError):
    pass


class ZeroTarget(ToolkitError):
    pass


class EmptyInput(ToolkitError):
    pass


@dataclass(frozen=True)
class GenerationReport:
    n_total: int
    n_valid: int
    n_unique_valid: int

    @property
    def validity(self) -> float:
        return self.n_valid / self.n_total if self.n_total else 0.0

    @property
    def uniqueness(self) -> float:
        return self.n_unique_valid / max(self.n_valid, 1)

    def as_dict(self) -> dict:
        return {
            "schema_version": 1,
            "n_total": self.n_total,
            "n_valid": self.n_valid,
            "n_unique_valid": self.n_unique_valid,
            "validity": self.validity,
            "uniqueness": self.uniqueness,
        }


def validity_uniqueness(smiles: Sequence[str], raw_keys: bool = False) -> GenerationReport:
    """Validity via the graph checker; uniqueness among valid generations.

    ``raw_keys=True`` deduplicates on the raw strings instead of canonical
    forms (exposed because the paper does not say which it used).
    """
    if not smiles:
        raise EmptyInput("no generations")
    n_valid = 0
    keys: set[str] = set()
    for s in smiles:
        report = check_smiles(s)
        if not report.valid:
            continue
        n_valid += 1
        keys.add(s if raw_keys else canonical_form(parse_smiles(s)))
    return GenerationReport(len(smiles), n_valid, len(keys))


def aar(ref: str, gen: str) -> float:
    """Positionwise recovery over the reference length; zero-filled when the
    generation is shorter, extra generated residues ignored."""
    if not ref:
        raise EmptyReference("reference sequence is empty")
    matches = sum(1 for i in range(len(ref)) if i < len(gen) and ref[i] == gen[i])
    return matches / len(ref)


def _average_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # ties share the average of ranks i+1..j+1
        avg = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of average-ranked data."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)} values")
    if len(xs) < 2:
        raise ValueError("need at least two points")
    rx = _average_ranks(xs)
    ry = _average_ranks(ys)
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0.0 or vy == 0.0:
        raise DegenerateConstantInput("an input is constant after ranking")
    return cov / (vx * vy) ** 0.5


def reactant_set_key(smiles: str) -> tuple[str, ...]:
    """Order-insensitive identity of a dot-separated reactant set."""
    return tuple(sorted(canonical_form(parse_smiles(part)) for part in smiles.split(".")))


def topk_reactant_accuracy(
    refs: Sequence[str], cands: Sequence[Sequence[str]], k: int
) -> float:
    """Hit iff any of the first k candidates equals the reference reactant
    multiset after per-component canonicalization."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(refs) != len(cands):
        raise LengthMismatch(f"{len(refs)} references vs {len(cands)} candidate lists")
    if not refs:
        raise EmptyInput("no references")
    hits = 0
    for ref, ranked in zip(refs, cands):
        ref_key = reactant_set_key(ref)
        for cand in list(ranked)[:k]:
            try:
                if reactant_set_key(cand) == ref_key:
                    hits += 1
                    break
            except ToolkitError:
                continue
    return hits / len(refs)


def novelty(gens: Iterable[str], reference: Iterable[str]) -> float:
    """|distinct generations not in the reference| / |distinct generations|.

    Keys must be pre-normalized (canonical SMILES, or sorted composition
    plus space group).  Returns 0.0 for an empty generation list.
    """
    unique = set(gens)
    if not unique:
        return 0.0
    reference_set = set(reference)
    return len(unique - reference_set) / len(unique)


def nw_identity(a: str, b: str, denominator: str = "alignment") -> float:
    """Global-alignment identity used by diversity clustering.

    The DP maximizes (matches, diagonal steps) lexicographically; with the
    ``alignment`` denominator, identity = matches / (len(a)+len(b)-diag).
    ``shorter`` divides by min(len(a), len(b)) instead.
    """
    if denominator not in ("alignment", "shorter"):
        raise ValueError(f"unknown denominator {denominator!r}")
    if not a or not b:
        raise EmptyInput("empty sequence")
    n, m = len(a), len(b)
    prev = [(0, 0)] * (m + 1)
    for i in range(1, n + 1):
        cur = [(0, 0)] * (m + 1)
        ai = a[i - 1]
        for j in range(1, m + 1):
            match = 1 if ai == b[j - 1] else 0
            diag = (prev[j - 1][0] + match, prev[j - 1][1] + 1)
            up = prev[j]
            left = cur[j - 1]
            cur[j] = max(diag, up, left)
        prev = cur
    matches, diag_steps = prev[m]
    if denominator == "shorter":
        return matches / min(n, m)
    return matches / (n + m - diag_steps)


def identity_cluster_diversity(
    seqs: Sequence[str], threshold: float = 0.5, denominator: str = "alignment"
) -> float:
    """Greedy leader clustering in input order; clusters / total."""
    if not seqs:
        raise EmptyInput("no sequences")
    leaders: list[str] = []
    for seq in seqs:
        for leader in leaders:
            if nw_identity(leader, seq, denominator) >= threshold:
                break
        else:
            leaders.append(seq)
    return len(leaders) / len(seqs)


def stability_rate(ehulls: Sequence[float], threshold: float = 0.1) -> float:
    """Fraction strictly below the stability threshold (eV/atom)."""
    if not ehulls:
        raise EmptyInput("no ehull values")
    return sum(1 for e in ehulls if e < threshold) / len(ehulls)


def success_within(
    values: Sequence[float], targets: Sequence[float], rel_tol: float = 0.10
) -> float:
    """Fraction of values within a relative tolerance of their targets.

    The boundary is a miss: a value exactly rel_tol away does not count.
    """
    if len(values) != len(targets):
        raise LengthMismatch(f"{len(values)} values vs {len(targets)} targets")
    if not values:
        raise EmptyInput("no values")
    for t in targets:
        if t == 0:
            raise ZeroTarget("relative tolerance undefined for target 0")
    hits = sum(1 for v, t in zip(values, targets) if abs(v - t) < rel_tol * abs(t))
    return hits / len(values)


DEFAULT_PROPERTY_DELTAS = {
    "hba": 0.0,
    "hbd": 0.0,
    "rot_bonds": 0.0,
    "qed": 0.05,
    "fsp3": 0.05,
    "tpsa": 5.0,
}


def property_correct_ratio(
    values: Sequence[float], targets: Sequence[float], delta: float
) -> float:
    """Fraction within an absolute tolerance; per-property defaults in
    :data:`DEFAULT_PROPERTY_DELTAS`."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if len(values) != len(targets):
        raise LengthMismatch(f"{len(values)} values vs {len(targets)} targets")
    if not values:
        raise EmptyInput("no values")
    hits = sum(1 for v, t in zip(values, targets) if abs(v - t) <= delta)
    return hits / len(values)


def composition_novelty_key(element_counts, space_group: int) -> str:
    """Canonical key for a material: sorted (element, count) pairs + sg."""
    pairs = sorted(tuple(p) for p in element_counts)
    return ";".join(f"{s}:{c}" for s, c in pairs) + f"@sg{space_group}"


def canonical_smiles_key(smiles: str) -> str:
    graph = parse_smiles(smiles)
    if not validate(graph).valid:
        raise ToolkitError(f"invalid SMILES {smiles!r}")
    return canonical_form(graph)
