"""FastAPI service wrapping the toolkit.

Run with ``uvicorn natureseq.service:app``.  Every endpoint is a thin shell
over the module APIs; toolkit errors map to HTTP 422 with a stable ``code``
(the exception class name) so clients can convert them back into typed
errors.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import bioseq, corpus, matcodec, metrics, tok
from ..errors import ToolkitError
from ..molgraph import (
    canonical_form,
    check_smiles,
    descriptors,
    parse_smiles,
    validate,
)
from . import schemas as s


def create_app() -> FastAPI:
    app = FastAPI(title="nature-seqkit", version="0.1.0")

    @app.exception_handler(ToolkitError)
    async def toolkit_error_handler(_: Request, exc: ToolkitError):
        return JSONResponse(
            status_code=422, content={"code": exc.code, "message": str(exc)}
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(_: Request, exc: ValueError):
        return JSONResponse(
            status_code=422, content={"code": "ValueError", "message": str(exc)}
        )

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/v1/tokenize", response_model=s.TokensResponse)
    def tokenize(req: s.TokenizeRequest):
        if req.domain == "mol":
            tokens = tok.tokenize_smiles(req.text)
        elif req.domain == "number":
            tokens = tok.tokenize_number(req.text)
        else:
            tokens = tok.tokenize_residues(req.text, req.domain)
        if req.wrap:
            tokens = tok.wrap(req.wrap, tokens).token_strings()
        return {"tokens": tokens}

    @app.post("/v1/detokenize", response_model=s.TextResponse)
    def detokenize(req: s.DetokenizeRequest):
        return {"text": tok.detokenize(tok.parse_tagged(req.tokens))}

    @app.post("/v1/smiles/validate", response_model=s.ValidityReportResponse)
    def smiles_validate(req: s.SmilesListRequest):
        return metrics.validity_uniqueness(req.smiles, raw_keys=req.raw).as_dict()

    @app.post("/v1/smiles/check", response_model=s.CheckResponse)
    def smiles_check(req: s.SmilesRequest):
        report = check_smiles(req.smiles)
        return {
            "valid": report.valid,
            "failures": [
                {"code": f.code, "position": f.position} for f in report.failures
            ],
        }

    @app.post("/v1/smiles/canonical", response_model=s.CanonicalResponse)
    def smiles_canonical(req: s.SmilesRequest):
        graph = parse_smiles(req.smiles)
        report = validate(graph)
        if not report.valid:
            raise ToolkitError(
                f"invalid SMILES: {[f.code for f in report.failures]}"
            )
        return {"canonical": canonical_form(graph)}

    @app.post("/v1/smiles/descriptors", response_model=s.DescriptorsResponse)
    def smiles_descriptors(req: s.SmilesRequest):
        return descriptors(parse_smiles(req.smiles)).as_dict()

    @app.post("/v1/dna/reverse-complement", response_model=s.TextResponse)
    def dna_revcomp(req: s.SequenceRequest):
        seq = bioseq.NucleotideSeq(req.sequence, "dna")
        return {"text": bioseq.reverse_complement(seq).bases}

    @app.post("/v1/dna/transcribe", response_model=s.TextResponse)
    def dna_transcribe(req: s.SequenceRequest):
        seq = bioseq.NucleotideSeq(req.sequence, "dna")
        return {"text": bioseq.transcribe(seq).bases}

    @app.post("/v1/dna/translate", response_model=s.TextResponse)
    def dna_translate(req: s.TranslateRequest):
        seq = bioseq.NucleotideSeq(req.sequence, req.kind)
        return {"text": bioseq.translate(seq, req.frame)}

    @app.post("/v1/dna/crrna", response_model=s.CrRNAResponse)
    def dna_crrna(req: s.CrRNARequest):
        verdict = bioseq.validate_crRNA(req.target, req.guide)
        return {
            "valid": verdict.valid,
            "failures": sorted(verdict.failures),
            "match_position": verdict.match_position,
            "strand": verdict.strand,
        }

    def _composition(pairs: list[s.CompositionPair]) -> matcodec.Composition:
        return matcodec.Composition(tuple((p.symbol, p.count) for p in pairs))

    @app.post("/v1/material/encode-composition", response_model=s.TokensResponse)
    def mat_encode_composition(req: s.EncodeCompositionRequest):
        return {
            "tokens": matcodec.encode_composition(
                _composition(req.composition), req.space_group
            )
        }

    @app.post("/v1/material/decode-composition", response_model=s.CompositionResponse)
    def mat_decode_composition(req: s.DecodeTokensRequest):
        comp, sg = matcodec.decode_composition(req.tokens)
        return {"composition": list(comp.element_counts), "space_group": sg}

    def _structure_payload(structure: matcodec.CrystalStructure) -> dict:
        return {
            "composition": list(structure.composition.element_counts),
            "space_group": structure.space_group,
            "lattice": list(structure.lattice),
            "frac_coords": list(structure.frac_coords),
        }

    @app.post("/v1/material/encode-structure", response_model=s.TokensResponse)
    def mat_encode_structure(req: s.StructureModel):
        structure = matcodec.CrystalStructure(
            matcodec.Composition(tuple(req.composition)),
            req.space_group,
            tuple(req.lattice),
            tuple(req.frac_coords),
        )
        return {"tokens": matcodec.encode_structure(structure)}

    @app.post("/v1/material/decode-structure", response_model=s.StructureModel)
    def mat_decode_structure(req: s.DecodeTokensRequest):
        return _structure_payload(matcodec.decode_structure(req.tokens))

    @app.post("/v1/material/parse-poscar", response_model=s.StructureModel)
    def mat_parse_poscar(req: s.PoscarRequest):
        return _structure_payload(
            matcodec.parse_poscar(req.text, space_group=req.space_group)
        )

    @app.post("/v1/material/smact", response_model=s.SmactResponse)
    def mat_smact(req: s.SmactRequest):
        verdict = matcodec.smact_valid(_composition(req.composition))
        out: dict = {"valid": verdict.valid, "witness": verdict.witness}
        if verdict.nearest_miss is not None:
            out["nearest_miss"] = {
                "assignment": verdict.nearest_miss[0],
                "residual": verdict.nearest_miss[1],
            }
        return out

    @app.post("/v1/corpus/render-instruction", response_model=s.RenderedResponse)
    def corpus_render(req: s.InstructionRequest):
        rendered = corpus.render_instruction(
            corpus.InstructionRecord(req.instruction, req.response, req.task)
        )
        return {
            "text": rendered.text,
            "tokens": rendered.token_strings(),
            "loss_mask": rendered.loss_mask,
        }

    @app.post("/v1/corpus/interleave", response_model=s.TextResponse)
    def corpus_interleave(req: s.InterleaveRequest):
        spans = [
            corpus.EntitySpan(sp.start, sp.end, sp.domain, sp.payload)
            for sp in req.spans
        ]
        return {"text": tok.detokenize(corpus.build_interleaved(req.text, spans))}

    @app.post("/v1/corpus/preference", response_model=s.PreferenceRequest)
    def corpus_preference(req: s.PreferenceRequest):
        record = corpus.make_preference_record(req.prompt, req.accepted, req.rejected)
        return {
            "prompt": record.prompt,
            "accepted": record.accepted,
            "rejected": record.rejected,
        }

    @app.post("/v1/metrics/aar", response_model=s.ValueResponse)
    def metric_aar(req: s.AarRequest):
        return {"value": metrics.aar(req.reference, req.generated)}

    @app.post("/v1/metrics/spearman", response_model=s.ValueResponse)
    def metric_spearman(req: s.SpearmanRequest):
        return {"value": metrics.spearman(req.xs, req.ys)}

    @app.post("/v1/metrics/topk-reactants", response_model=s.ValueResponse)
    def metric_topk(req: s.TopkRequest):
        return {
            "value": metrics.topk_reactant_accuracy(req.references, req.candidates, req.k)
        }

    @app.post("/v1/metrics/novelty", response_model=s.ValueResponse)
    def metric_novelty(req: s.NoveltyRequest):
        return {"value": metrics.novelty(req.generated, req.reference)}

    @app.post("/v1/metrics/diversity", response_model=s.ValueResponse)
    def metric_diversity(req: s.DiversityRequest):
        return {
            "value": metrics.identity_cluster_diversity(
                req.sequences, req.threshold, req.denominator
            )
        }

    @app.post("/v1/metrics/stability", response_model=s.ValueResponse)
    def metric_stability(req: s.StabilityRequest):
        return {"value": metrics.stability_rate(req.ehulls, req.threshold)}

    @app.post("/v1/metrics/success-within", response_model=s.ValueResponse)
    def metric_success(req: s.SuccessWithinRequest):
        return {"value": metrics.success_within(req.values, req.targets, req.rel_tol)}

    @app.post("/v1/metrics/property-correct", response_model=s.ValueResponse)
    def metric_property(req: s.PropertyCorrectRequest):
        return {
            "value": metrics.property_correct_ratio(req.values, req.targets, req.delta)
        }

    return app


app = create_app()
