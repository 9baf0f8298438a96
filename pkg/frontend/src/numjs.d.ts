// Minimal surface of numjs used by this package and by the rl-ts type
// definitions; the numjs package ships no declarations of its own.
declare module 'numjs' {
  namespace nj {
    interface NdArray<T = number> {
      shape: number[];
      selection: { data: ArrayLike<T> };
      size: number;
      flatten(): NdArray<T>;
      reshape(...shape: number[]): NdArray<T>;
      tolist(): unknown;
      get(...indices: number[]): T;
    }
    function array<T = number>(values: ArrayLike<T> | unknown, dtype?: string): NdArray<T>;
    function zeros(shape: number | number[], dtype?: string): NdArray<number>;
  }
  export = nj;
}
