/* tslint:disable */
/* eslint-disable */

export class Run {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly estimate: string;
    readonly shd: number;
    /**
     * True DAG as an edge list.
     */
    readonly truth: string;
}

export function acyclicitySurface(w_max: number, points: number): Float64Array;

export function quasiMcpCurve(lambda: number, delta: number, t_max: number, points: number): Float64Array;

export function simulateAndLearn(p: number, k: number, family: string, n: number, seed: bigint): Run;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_run_free: (a: number, b: number) => void;
    readonly acyclicitySurface: (a: number, b: number) => [number, number, number, number];
    readonly quasiMcpCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly run_estimate: (a: number) => [number, number];
    readonly run_shd: (a: number) => number;
    readonly run_truth: (a: number) => [number, number];
    readonly simulateAndLearn: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
