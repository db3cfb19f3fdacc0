/** Wire types for the service endpoints. */

export type Domain = "mol" | "protein" | "dna" | "rna" | "number";

export interface ValidityReport {
  schema_version: number;
  n_total: number;
  n_valid: number;
  n_unique_valid: number;
  validity: number;
  uniqueness: number;
}

export interface CheckFailure {
  code: string;
  position: number;
}

export interface CheckResult {
  valid: boolean;
  failures: CheckFailure[];
}

export interface Descriptors {
  hbd: number;
  hba: number;
  rot_bonds: number;
  fsp3: number;
  heavy_atoms: number;
  components: number;
}

export interface CrRNAVerdict {
  valid: boolean;
  failures: string[];
  match_position: number | null;
  strand: string | null;
}

export interface CompositionPair {
  symbol: string;
  count: number;
}

export interface CrystalStructure {
  composition: [string, number][];
  space_group: number;
  lattice: number[];
  frac_coords: [number, number, number][];
}

export interface SmactVerdict {
  valid: boolean;
  witness: Record<string, number> | null;
  nearest_miss?: { assignment: Record<string, number>; residual: number } | null;
}

export interface RenderedInstruction {
  text: string;
  tokens: string[];
  loss_mask: number[];
}

export interface EntitySpan {
  start: number;
  end: number;
  domain: string;
  payload: string;
}

export interface PreferenceRecord {
  prompt: string;
  accepted: string;
  rejected: string;
}
