/**
 * HTTP client for the scientific-sequence toolkit service.
 *
 * Every method is a thin call to one endpoint; outputs carry exactly the
 * payloads the service returns, so results are interchangeable with the
 * toolkit's CLI output on the same inputs.
 */

import { errorFromPayload, ToolkitError } from "./errors.js";
import type {
  CheckResult,
  CompositionPair,
  CrRNAVerdict,
  CrystalStructure,
  Descriptors,
  Domain,
  EntitySpan,
  PreferenceRecord,
  RenderedInstruction,
  SmactVerdict,
  ValidityReport,
} from "./types.js";

export interface ClientOptions {
  baseUrl?: string;
  fetchImpl?: typeof fetch;
}

export class NatureSeqClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "http://127.0.0.1:8040").replace(/\/$/, "");
    this.fetchImpl = options.fetchImpl ?? fetch;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw errorFromPayload(payload as { code?: string; message?: string });
    }
    return payload as T;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/v1/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  async tokenize(domain: Domain, text: string, wrap?: string): Promise<string[]> {
    const out = await this.post<{ tokens: string[] }>("/v1/tokenize", {
      domain,
      text,
      wrap: wrap ?? null,
    });
    return out.tokens;
  }

  async detokenize(tokens: string[]): Promise<string> {
    const out = await this.post<{ text: string }>("/v1/detokenize", { tokens });
    return out.text;
  }

  async validateSmiles(smiles: string[], raw = false): Promise<ValidityReport> {
    return this.post<ValidityReport>("/v1/smiles/validate", { smiles, raw });
  }

  async checkSmiles(smiles: string): Promise<CheckResult> {
    return this.post<CheckResult>("/v1/smiles/check", { smiles });
  }

  async canonical(smiles: string): Promise<string> {
    const out = await this.post<{ canonical: string }>("/v1/smiles/canonical", { smiles });
    return out.canonical;
  }

  async descriptors(smiles: string): Promise<Descriptors> {
    return this.post<Descriptors>("/v1/smiles/descriptors", { smiles });
  }

  async reverseComplement(sequence: string): Promise<string> {
    const out = await this.post<{ text: string }>("/v1/dna/reverse-complement", { sequence });
    return out.text;
  }

  async transcribe(sequence: string): Promise<string> {
    const out = await this.post<{ text: string }>("/v1/dna/transcribe", { sequence });
    return out.text;
  }

  async translate(sequence: string, frame = 0, kind: "dna" | "rna" = "dna"): Promise<string> {
    const out = await this.post<{ text: string }>("/v1/dna/translate", {
      sequence,
      frame,
      kind,
    });
    return out.text;
  }

  async validateCrRNA(target: string, guide: string): Promise<CrRNAVerdict> {
    return this.post<CrRNAVerdict>("/v1/dna/crrna", { target, guide });
  }

  async encodeComposition(
    composition: CompositionPair[],
    spaceGroup: number
  ): Promise<string[]> {
    const out = await this.post<{ tokens: string[] }>("/v1/material/encode-composition", {
      composition,
      space_group: spaceGroup,
    });
    return out.tokens;
  }

  async decodeComposition(tokens: string[]): Promise<{ composition: [string, number][]; space_group: number }> {
    return this.post("/v1/material/decode-composition", { tokens });
  }

  async encodeStructure(structure: CrystalStructure): Promise<string[]> {
    const out = await this.post<{ tokens: string[] }>("/v1/material/encode-structure", structure);
    return out.tokens;
  }

  async decodeStructure(tokens: string[]): Promise<CrystalStructure> {
    return this.post<CrystalStructure>("/v1/material/decode-structure", { tokens });
  }

  async parsePoscar(text: string, spaceGroup = 1): Promise<CrystalStructure> {
    return this.post<CrystalStructure>("/v1/material/parse-poscar", {
      text,
      space_group: spaceGroup,
    });
  }

  async smact(composition: CompositionPair[]): Promise<SmactVerdict> {
    return this.post<SmactVerdict>("/v1/material/smact", { composition });
  }

  async renderInstruction(
    instruction: string,
    response: string,
    task = ""
  ): Promise<RenderedInstruction> {
    return this.post<RenderedInstruction>("/v1/corpus/render-instruction", {
      instruction,
      response,
      task,
    });
  }

  async interleave(text: string, spans: EntitySpan[]): Promise<string> {
    const out = await this.post<{ text: string }>("/v1/corpus/interleave", { text, spans });
    return out.text;
  }

  async makePreference(
    prompt: string,
    accepted: string,
    rejected: string
  ): Promise<PreferenceRecord> {
    return this.post<PreferenceRecord>("/v1/corpus/preference", {
      prompt,
      accepted,
      rejected,
    });
  }

  async aar(reference: string, generated: string): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/aar", {
      reference,
      generated,
    });
    return out.value;
  }

  async spearman(xs: number[], ys: number[]): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/spearman", { xs, ys });
    return out.value;
  }

  async topkReactantAccuracy(
    references: string[],
    candidates: string[][],
    k = 1
  ): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/topk-reactants", {
      references,
      candidates,
      k,
    });
    return out.value;
  }

  async novelty(generated: string[], reference: string[]): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/novelty", {
      generated,
      reference,
    });
    return out.value;
  }

  async diversity(
    sequences: string[],
    threshold = 0.5,
    denominator: "alignment" | "shorter" = "alignment"
  ): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/diversity", {
      sequences,
      threshold,
      denominator,
    });
    return out.value;
  }

  async stabilityRate(ehulls: number[], threshold = 0.1): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/stability", {
      ehulls,
      threshold,
    });
    return out.value;
  }

  async successWithin(values: number[], targets: number[], relTol = 0.1): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/success-within", {
      values,
      targets,
      rel_tol: relTol,
    });
    return out.value;
  }

  async propertyCorrectRatio(values: number[], targets: number[], delta: number): Promise<number> {
    const out = await this.post<{ value: number }>("/v1/metrics/property-correct", {
      values,
      targets,
      delta,
    });
    return out.value;
  }
}

export { ToolkitError };
