/** Typed errors mirroring the service's error codes. */

export class ToolkitError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.name = code;
    this.code = code;
  }
}

export class TokenizeError extends ToolkitError {}
export class PrecisionError extends ToolkitError {}
export class StructureError extends ToolkitError {}
export class ParseError extends ToolkitError {}
export class SmilesParseError extends ToolkitError {}
export class BadSpaceGroup extends ToolkitError {}
export class NoSpaceGroup extends ToolkitError {}
export class UnknownElement extends ToolkitError {}
export class WrongNumberCount extends ToolkitError {}
export class DuplicateResponses extends ToolkitError {}
export class ValidationError extends ToolkitError {}
export class LengthMismatch extends ToolkitError {}
export class DegenerateConstantInput extends ToolkitError {}
export class ZeroTarget extends ToolkitError {}
export class EmptyInput extends ToolkitError {}
export class EmptyReference extends ToolkitError {}

const ERROR_CLASSES: Record<string, new (code: string, message: string) => ToolkitError> = {
  TokenizeError,
  PrecisionError,
  StructureError,
  ParseError,
  SmilesParseError,
  BadSpaceGroup,
  NoSpaceGroup,
  UnknownElement,
  WrongNumberCount,
  DuplicateResponses,
  ValidationError,
  LengthMismatch,
  DegenerateConstantInput,
  ZeroTarget,
  EmptyInput,
  EmptyReference,
};

/** Convert a service error payload into the matching typed error. */
export function errorFromPayload(payload: { code?: string; message?: string }): ToolkitError {
  const code = payload.code ?? "ToolkitError";
  const message = payload.message ?? "unknown error";
  const cls = ERROR_CLASSES[code] ?? ToolkitError;
  return new cls(code, message);
}
