/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const board_probability: (a: number, b: number, c: number) => [number, number, number, number];
export const fairness_curve: (a: number) => [number, number, number, number];
export const hanoi_board: (a: number) => [number, number, number, number];
export const sierpinski_view: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
