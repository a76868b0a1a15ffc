/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_morphsession_free: (a: number, b: number) => void;
export const drawing_metrics: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const morphsession_constrained_metrics: (a: number) => [number, number];
export const morphsession_coords: (a: number) => [number, number];
export const morphsession_edges: (a: number) => [number, number];
export const morphsession_iteration: (a: number) => number;
export const morphsession_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const morphsession_percent: (a: number) => number;
export const morphsession_start_coords: (a: number) => [number, number];
export const morphsession_step: (a: number, b: number) => [number, number, number];
export const morphsession_target: (a: number) => [number, number];
export const shape_points: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
