"""Command-line interface.

Every subcommand is a thin shell over the module APIs with line-oriented
streaming: one record per input line, one result per output line, data on
stdout, diagnostics on stderr.  Exit codes: 0 success, 1 validation
failures in ``--strict`` mode, 2 usage errors.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor

import click

from . import bioseq, corpus, matcodec, metrics, tok
from . import vocab as vocab_mod
from .errors import ToolkitError
from .molgraph import (
    canonical_form,
    check_smiles,
    descriptors,
    parse_smiles,
    split_components,
    validate,
)


def _lines(fh) -> list[str]:
    return [line.rstrip("\n") for line in fh if line.strip()]


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@click.group()
def main() -> None:
    """Scientific-sequence toolkit.

    The NATURE_SEQKIT_TABLES environment variable overrides the directory
    holding the oxidation-state and electronegativity tables.
    """


@main.command()
@click.option("--domain", required=True,
              type=click.Choice(["mol", "protein", "dna", "rna", "number"]))
@click.option("--wrap", "wrap_tag", default=None,
              help="Wrap tokens in this entity tag's boundary pair.")
@click.argument("input", type=click.File("r"), default="-")
def tokenize(domain: str, wrap_tag: str | None, input) -> None:
    """Tokenize one entity per input line; tokens are space-joined."""
    for line in _lines(input):
        try:
            if domain == "mol":
                tokens = tok.tokenize_smiles(line)
            elif domain == "number":
                tokens = tok.tokenize_number(line)
            else:
                tokens = tok.tokenize_residues(line, domain)
            if wrap_tag:
                tokens = tok.wrap(wrap_tag, tokens).token_strings()
            click.echo(" ".join(tokens))
        except ToolkitError as exc:
            _fail(str(exc))


@main.command()
@click.argument("input", type=click.File("r"), default="-")
def detokenize(input) -> None:
    """Join space-separated token lines back into text."""
    for line in _lines(input):
        try:
            click.echo(tok.detokenize(tok.parse_tagged(line.split(" "))))
        except ToolkitError as exc:
            _fail(str(exc))


@main.command("validate-smiles")
@click.option("--strict", is_flag=True, help="Exit 1 if any line is invalid.")
@click.option("--raw", is_flag=True, help="Deduplicate raw strings, not canonical forms.")
@click.argument("input", type=click.File("r"), default="-")
def validate_smiles(strict: bool, raw: bool, input) -> None:
    """Validity/uniqueness report over one SMILES per line."""
    lines = _lines(input)
    if not lines:
        _fail("no input")
    report = metrics.validity_uniqueness(lines, raw_keys=raw)
    click.echo(_dump(report.as_dict()))
    if strict and report.n_valid != report.n_total:
        sys.exit(1)


@main.command()
@click.argument("input", type=click.File("r"), default="-")
def canon(input) -> None:
    """Canonical SMILES per line."""
    failed = False
    for line in _lines(input):
        try:
            graph = parse_smiles(line)
            report = validate(graph)
            if not report.valid:
                raise ToolkitError(
                    f"invalid SMILES {line!r}: {[f.code for f in report.failures]}"
                )
            click.echo(canonical_form(graph))
        except ToolkitError as exc:
            click.echo(f"error: {exc}", err=True)
            failed = True
    if failed:
        sys.exit(1)


@main.command("descriptors")
@click.argument("input", type=click.File("r"), default="-")
def descriptors_cmd(input) -> None:
    """Graph descriptors per line as JSON."""
    for line in _lines(input):
        try:
            click.echo(_dump(descriptors(parse_smiles(line)).as_dict()))
        except ToolkitError as exc:
            _fail(str(exc))


@main.command("components")
@click.argument("input", type=click.File("r"), default="-")
def components_cmd(input) -> None:
    """Canonically sorted dot-components per line."""
    for line in _lines(input):
        try:
            parts = [canonical_form(g) for g in split_components(parse_smiles(line))]
            click.echo(" ".join(parts))
        except ToolkitError as exc:
            _fail(str(exc))


@main.group()
def dna() -> None:
    """Central-dogma operations."""


@dna.command()
@click.argument("input", type=click.File("r"), default="-")
def revcomp(input) -> None:
    for line in _lines(input):
        try:
            click.echo(bioseq.reverse_complement(bioseq.NucleotideSeq(line, "dna")).bases)
        except ToolkitError as exc:
            _fail(str(exc))


@dna.command()
@click.argument("input", type=click.File("r"), default="-")
def transcribe(input) -> None:
    for line in _lines(input):
        try:
            click.echo(bioseq.transcribe(bioseq.NucleotideSeq(line, "dna")).bases)
        except ToolkitError as exc:
            _fail(str(exc))


@dna.command()
@click.option("--frame", type=click.IntRange(0, 2), default=0)
@click.option("--kind", type=click.Choice(["dna", "rna"]), default="dna")
@click.argument("input", type=click.File("r"), default="-")
def translate(frame: int, kind: str, input) -> None:
    for line in _lines(input):
        try:
            click.echo(bioseq.translate(bioseq.NucleotideSeq(line, kind), frame))
        except ToolkitError as exc:
            _fail(str(exc))


@dna.command()
@click.option("--target", required=True, help="Target DNA (N allowed).")
@click.option("--guide", required=True, help="Guide sequence (T or U).")
def crrna(target: str, guide: str) -> None:
    try:
        verdict = bioseq.validate_crRNA(target, guide)
    except (ToolkitError, ValueError) as exc:
        _fail(str(exc))
    click.echo(
        _dump(
            {
                "valid": verdict.valid,
                "failures": sorted(verdict.failures),
                "match_position": verdict.match_position,
                "strand": verdict.strand,
            }
        )
    )


@dna.command()
@click.argument("input", type=click.File("r"), default="-")
def fasta(input) -> None:
    """Flatten FASTA records to 'header<TAB>sequence' lines."""
    try:
        for header, seq in bioseq.read_fasta(input):
            click.echo(f"{header}\t{seq}")
    except ToolkitError as exc:
        _fail(str(exc))


def _structure_to_json(s: matcodec.CrystalStructure) -> dict:
    return {
        "composition": [[sym, count] for sym, count in s.composition.element_counts],
        "space_group": s.space_group,
        "lattice": list(s.lattice),
        "frac_coords": [list(c) for c in s.frac_coords],
    }


def _structure_from_json(obj: dict) -> matcodec.CrystalStructure:
    return matcodec.CrystalStructure(
        matcodec.Composition(tuple((s, c) for s, c in obj["composition"])),
        obj["space_group"],
        tuple(obj["lattice"]),
        tuple(tuple(c) for c in obj["frac_coords"]),
    )


def parse_formula(formula: str) -> matcodec.Composition:
    """'Li4O8' or 'Na Cl' or 'NaCl' -> Composition."""
    import re as _re

    pairs = _re.findall(r"([A-Z][a-z]?)(\d*)", formula.replace(" ", ""))
    pairs = [(sym, int(cnt) if cnt else 1) for sym, cnt in pairs if sym]
    if not pairs:
        raise ToolkitError(f"cannot read formula {formula!r}")
    return matcodec.Composition.from_pairs(pairs)


@main.group()
def mat() -> None:
    """Crystal codec and composition screening."""


@mat.command("encode-comp")
@click.option("--sg", type=int, required=True)
@click.argument("formula")
def encode_comp(sg: int, formula: str) -> None:
    try:
        comp = parse_formula(formula)
        click.echo(" ".join(matcodec.encode_composition(comp, sg)))
    except ToolkitError as exc:
        _fail(str(exc))


@mat.command("decode-comp")
@click.argument("input", type=click.File("r"), default="-")
def decode_comp(input) -> None:
    for line in _lines(input):
        try:
            comp, sg = matcodec.decode_composition(line.split(" "))
            click.echo(
                _dump({"composition": [[s, c] for s, c in comp.element_counts], "space_group": sg})
            )
        except ToolkitError as exc:
            _fail(str(exc))


@mat.command()
@click.argument("input", type=click.File("r"), default="-")
def encode(input) -> None:
    """Structure JSON (one per line) to token line."""
    for line in _lines(input):
        try:
            structure = _structure_from_json(json.loads(line))
            click.echo(" ".join(matcodec.encode_structure(structure)))
        except (ToolkitError, KeyError, ValueError) as exc:
            _fail(str(exc))


@mat.command()
@click.argument("input", type=click.File("r"), default="-")
def decode(input) -> None:
    """Token line to structure JSON."""
    for line in _lines(input):
        try:
            structure = matcodec.decode_structure(line.split(" "))
            click.echo(_dump(_structure_to_json(structure)))
        except ToolkitError as exc:
            _fail(str(exc))


@mat.command()
@click.option("--sg", type=int, default=1, show_default=True,
              help="Space group (POSCAR files carry none).")
@click.argument("poscar", type=click.File("r"))
def poscar(sg: int, poscar) -> None:
    try:
        structure = matcodec.parse_poscar(poscar.read(), space_group=sg)
        click.echo(_dump(_structure_to_json(structure)))
    except ToolkitError as exc:
        _fail(str(exc))


@mat.command()
@click.argument("formula")
def smact(formula: str) -> None:
    try:
        verdict = matcodec.smact_valid(parse_formula(formula))
    except ToolkitError as exc:
        _fail(str(exc))
    payload = {"valid": verdict.valid, "witness": verdict.witness}
    if verdict.nearest_miss is not None:
        payload["nearest_miss"] = {
            "assignment": verdict.nearest_miss[0],
            "residual": verdict.nearest_miss[1],
        }
    click.echo(_dump(payload))


@main.group("corpus")
def corpus_grp() -> None:
    """Corpus construction."""


def _sharded(items: list, shards: int, fn):
    """Apply fn per shard; concatenation preserves serial order."""
    if shards <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    bounds = corpus.shard_bounds(len(items), shards)
    with ThreadPoolExecutor(max_workers=shards) as pool:
        chunks = pool.map(lambda be: [fn(i) for i in items[be[0]:be[1]]], bounds)
        return [out for chunk in chunks for out in chunk]


@corpus_grp.command()
@click.option("--shards", type=int, default=1, show_default=True)
@click.argument("input", type=click.File("r"), default="-")
def interleave(shards: int, input) -> None:
    """JSONL {text, spans} to interleaved text lines."""
    def one(line: str) -> str:
        text, spans = corpus.spans_from_json(line)
        return tok.detokenize(corpus.build_interleaved(text, spans))

    try:
        for out in _sharded(_lines(input), shards, one):
            click.echo(out)
    except (ToolkitError, KeyError, ValueError) as exc:
        _fail(str(exc))


@corpus_grp.command()
@click.option("--shards", type=int, default=1, show_default=True)
@click.option("--vocab", "vocab_path", type=click.Path(exists=True), default=None,
              help="Also emit token ids looked up in this vocabulary file.")
@click.argument("input", type=click.File("r"), default="-")
def render(shards: int, vocab_path: str | None, input) -> None:
    """JSONL {instruction, response, task} to rendered JSONL."""
    vocabulary = None
    if vocab_path:
        with open(vocab_path) as fh:
            vocabulary = vocab_mod.load_vocab(fh)

    def one(line: str) -> str:
        rendered = corpus.render_instruction(corpus.instruction_from_json(line))
        payload = {
            "text": rendered.text,
            "tokens": rendered.token_strings(),
            "loss_mask": rendered.loss_mask,
        }
        if vocabulary is not None:
            payload["ids"] = corpus.encode_tagged(rendered.tokens, vocabulary)
        return _dump(payload)

    try:
        for out in _sharded(_lines(input), shards, one):
            click.echo(out)
    except (ToolkitError, KeyError, ValueError) as exc:
        _fail(str(exc))


@corpus_grp.command("pack-pretrain")
@click.option("--length", "-l", type=int, required=True)
@click.option("--pad-id", type=int, required=True)
@click.option("--out", type=click.Path(), required=True, help="Binary output path.")
@click.argument("input", type=click.File("r"), default="-")
def pack_pretrain_cmd(length: int, pad_id: int, out: str, input) -> None:
    """JSONL {"ids": [...]} documents to packed rows (+ .manifest.json)."""
    docs = [json.loads(line)["ids"] for line in _lines(input)]
    try:
        rows = corpus.pack_pretrain(docs, length, pad_id)
        with open(out, "wb") as data_fh, open(out + ".manifest.json", "w") as man_fh:
            count = corpus.write_packed(rows, length, pad_id, data_fh, man_fh)
    except ToolkitError as exc:
        _fail(str(exc))
    click.echo(_dump({"rows": count, "length": length}))


@corpus_grp.command("pack-posttrain")
@click.option("--length", "-l", type=int, required=True)
@click.option("--pad-id", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
@click.argument("input", type=click.File("r"), default="-")
def pack_posttrain_cmd(length: int, pad_id: int, out: str, input) -> None:
    """JSONL {"ids": [...], "loss_mask": [...]} records to one row each."""
    records = []
    for line in _lines(input):
        obj = json.loads(line)
        records.append((obj["ids"], obj["loss_mask"]))
    try:
        rows = corpus.pack_posttrain(records, length, pad_id)
        with open(out, "wb") as data_fh, open(out + ".manifest.json", "w") as man_fh:
            count = corpus.write_packed(rows, length, pad_id, data_fh, man_fh)
    except ToolkitError as exc:
        _fail(str(exc))
    click.echo(_dump({"rows": count, "length": length}))


@corpus_grp.command()
@click.argument("input", type=click.File("r"), default="-")
def prefs(input) -> None:
    """Validate and re-emit preference JSONL."""
    for line in _lines(input):
        try:
            record = corpus.preference_from_json(line)
            click.echo(corpus.preference_to_json(record))
        except (ToolkitError, KeyError, ValueError) as exc:
            _fail(str(exc))


@main.group("metrics")
def metrics_grp() -> None:
    """Evaluation metrics."""


@metrics_grp.command("validity-uniqueness")
@click.option("--raw", is_flag=True)
@click.argument("input", type=click.File("r"), default="-")
def vu_cmd(raw: bool, input) -> None:
    try:
        click.echo(_dump(metrics.validity_uniqueness(_lines(input), raw_keys=raw).as_dict()))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("aar")
@click.option("--ref", required=True)
@click.option("--gen", required=True)
def aar_cmd(ref: str, gen: str) -> None:
    try:
        click.echo(_dump({"aar": metrics.aar(ref, gen)}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("spearman")
@click.argument("input", type=click.File("r"), default="-")
def spearman_cmd(input) -> None:
    """Lines of 'x<TAB>y' (or 'x y') pairs."""
    xs, ys = [], []
    for line in _lines(input):
        x, y = line.replace("\t", " ").split()
        xs.append(float(x))
        ys.append(float(y))
    try:
        click.echo(_dump({"spearman": metrics.spearman(xs, ys)}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("topk-reactants")
@click.option("-k", type=int, default=1, show_default=True)
@click.argument("input", type=click.File("r"), default="-")
def topk_cmd(k: int, input) -> None:
    """JSONL {"reference": ..., "candidates": [...]} records."""
    refs, cands = [], []
    for line in _lines(input):
        obj = json.loads(line)
        refs.append(obj["reference"])
        cands.append(obj["candidates"])
    try:
        click.echo(_dump({"k": k, "accuracy": metrics.topk_reactant_accuracy(refs, cands, k)}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("novelty")
@click.option("--reference", "reference_path", type=click.Path(exists=True), required=True)
@click.option("--kind", type=click.Choice(["smiles", "material", "raw"]), default="raw",
              show_default=True, help="Key normalization applied to both files.")
@click.argument("input", type=click.File("r"), default="-")
def novelty_cmd(reference_path: str, kind: str, input) -> None:
    def normalize(line: str) -> str:
        if kind == "smiles":
            return metrics.canonical_smiles_key(line)
        if kind == "material":
            comp, sg = matcodec.decode_composition(line.split(" "))
            return metrics.composition_novelty_key(comp.element_counts, sg)
        return line

    try:
        gens = [normalize(line) for line in _lines(input)]
        with open(reference_path) as fh:
            reference = {normalize(line) for line in _lines(fh)}
        click.echo(_dump({"novelty": metrics.novelty(gens, reference)}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("diversity")
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--denominator", type=click.Choice(["alignment", "shorter"]),
              default="alignment", show_default=True)
@click.argument("input", type=click.File("r"), default="-")
def diversity_cmd(threshold: float, denominator: str, input) -> None:
    try:
        value = metrics.identity_cluster_diversity(_lines(input), threshold, denominator)
        click.echo(_dump({"diversity": value}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("stability")
@click.option("--threshold", type=float, default=0.1, show_default=True)
@click.argument("input", type=click.File("r"), default="-")
def stability_cmd(threshold: float, input) -> None:
    try:
        values = [float(line) for line in _lines(input)]
        click.echo(_dump({"stability_rate": metrics.stability_rate(values, threshold)}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("success-within")
@click.option("--rel-tol", type=float, default=0.10, show_default=True)
@click.argument("input", type=click.File("r"), default="-")
def success_cmd(rel_tol: float, input) -> None:
    """Lines of 'value target' pairs."""
    values, targets = [], []
    for line in _lines(input):
        v, t = line.replace("\t", " ").split()
        values.append(float(v))
        targets.append(float(t))
    try:
        click.echo(_dump({"success_rate": metrics.success_within(values, targets, rel_tol)}))
    except ToolkitError as exc:
        _fail(str(exc))


@metrics_grp.command("property-correct")
@click.option("--delta", type=float, required=True)
@click.argument("input", type=click.File("r"), default="-")
def property_cmd(delta: float, input) -> None:
    """Lines of 'value target' pairs with an absolute tolerance."""
    values, targets = [], []
    for line in _lines(input):
        v, t = line.replace("\t", " ").split()
        values.append(float(v))
        targets.append(float(t))
    try:
        click.echo(_dump({"correct_ratio": metrics.property_correct_ratio(values, targets, delta)}))
    except ToolkitError as exc:
        _fail(str(exc))


@main.group("vocab")
def vocab_grp() -> None:
    """Vocabulary build and inspection."""


@vocab_grp.command("build")
@click.option("--base-file", type=click.File("r"), default=None,
              help="One base token per line; default is a tiny placeholder base.")
@click.option("--preset", type=click.Choice(["paper", "minimal"]), default="paper",
              show_default=True)
@click.option("-o", "--out", type=click.File("w"), default="-")
def vocab_build(base_file, preset: str, out) -> None:
    base = _lines(base_file) if base_file else ["<base>"]
    if preset == "paper":
        alphabets = vocab_mod.default_alphabets()
    else:
        alphabets = {"dna": list("ACGT")}
    try:
        built = vocab_mod.build_vocab(base, alphabets)
        vocab_mod.save_vocab(built, out)
    except ToolkitError as exc:
        _fail(str(exc))


@vocab_grp.command("inspect")
@click.argument("vocab_file", type=click.File("r"))
def vocab_inspect(vocab_file) -> None:
    try:
        v = vocab_mod.load_vocab(vocab_file)
    except ToolkitError as exc:
        _fail(str(exc))
    partition = vocab_mod.freeze_partition(v)
    click.echo(
        _dump(
            {
                "size": len(v),
                "base_size": v.base_size,
                "domain_counts": v.domain_counts,
                "frozen": [partition.frozen_ids.start, partition.frozen_ids.stop],
                "trainable": [partition.trainable_ids.start, partition.trainable_ids.stop],
            }
        )
    )


if __name__ == "__main__":
    main()
