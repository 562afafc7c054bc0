/* tslint:disable */
/* eslint-disable */

/**
 * Radiated power over the front half-plane for both designs.
 */
export function beam_pattern(scenario: string, antennas: number, kappa_db: number, rotation_deg: number, points: number): string;

/**
 * Design-point worst-case energy (dB) of both designs over a full turn.
 */
export function rotation_curve(scenario: string, antennas: number, kappa_db: number, step_deg: number): string;

/**
 * LP and SDP designs for a fixed scenario (`"A"`, `"B"`, `"C"`) with eight
 * devices.
 */
export function solve_scenario(scenario: string, antennas: number, kappa_db: number, rotation_deg: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly beam_pattern: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly rotation_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly solve_scenario: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
