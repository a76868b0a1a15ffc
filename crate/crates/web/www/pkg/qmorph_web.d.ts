/* tslint:disable */
/* eslint-disable */

/**
 * An interactive morph: a generated graph, its force layout, and an
 * annealer that the page advances a batch of iterations per frame.
 */
export class MorphSession {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Starting and current values of the constrained metrics, interleaved.
     */
    constrained_metrics(): Float64Array;
    /**
     * Current coordinates as `[x0, y0, x1, y1, ...]`.
     */
    coords(): Float64Array;
    /**
     * Edge endpoints as `[a0, b0, a1, b1, ...]`.
     */
    edges(): Uint32Array;
    iteration(): number;
    /**
     * `kind` is `tree`, `ba` or `grid`; `shape` a built-in target label;
     * `constraints` a combination such as `ELD` or `ST-CN`.
     */
    constructor(kind: string, size: number, shape: string, constraints: string, n_max: number, seed: number);
    percent(): number;
    start_coords(): Float64Array;
    /**
     * Runs up to `count` iterations; returns `true` while more remain.
     */
    step(count: number): boolean;
    target(): Float64Array;
}

/**
 * ST, ELD, CN and AR of a drawing given as flat edge and coordinate arrays.
 * Undefined metrics come back as NaN.
 */
export function drawing_metrics(edges: Uint32Array, coords: Float64Array): Float64Array;

/**
 * Points of a built-in target shape as `[x0, y0, ...]`.
 */
export function shape_points(label: string, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_morphsession_free: (a: number, b: number) => void;
    readonly drawing_metrics: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly morphsession_constrained_metrics: (a: number) => [number, number];
    readonly morphsession_coords: (a: number) => [number, number];
    readonly morphsession_edges: (a: number) => [number, number];
    readonly morphsession_iteration: (a: number) => number;
    readonly morphsession_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
    readonly morphsession_percent: (a: number) => number;
    readonly morphsession_start_coords: (a: number) => [number, number];
    readonly morphsession_step: (a: number, b: number) => [number, number, number];
    readonly morphsession_target: (a: number) => [number, number];
    readonly shape_points: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
