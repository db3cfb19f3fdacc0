export { NatureSeqClient } from "./client.js";
export type { ClientOptions } from "./client.js";
export * from "./errors.js";
export * from "./types.js";
