/**
 * Denoising models served by the bridge.
 *
 * A model maps a grid and the forwarded strength to a same-shape grid. The
 * bridge never resizes or normalizes: mid-iteration values may leave [0, 1]
 * and must pass through untouched apart from the denoising itself. Models
 * that are blind to the strength still consume it from the stream.
 */

export interface Grid {
  height: number;
  width: number;
  values: Float64Array;
}

export type Model = (grid: Grid, strength: number) => Float64Array;

export function identityModel(): Model {
  return (grid) => grid.values.slice();
}

/** Pointwise amplifier; expansive for factor > 1 (self-check exercise). */
export function scaleModel(factor: number): Model {
  return (grid) => {
    const out = new Float64Array(grid.values.length);
    for (let i = 0; i < out.length; i++) {
      out[i] = factor * grid.values[i];
    }
    return out;
  };
}

/**
 * Separable Gaussian smoothing with replicated borders. Blind: the kernel
 * width is fixed at load time, the forwarded strength is ignored.
 */
export function blurModel(sigma: number): Model {
  const radius = Math.max(1, Math.ceil(3 * sigma));
  const kernel = new Float64Array(2 * radius + 1);
  let sum = 0;
  for (let i = -radius; i <= radius; i++) {
    const w = Math.exp(-(i * i) / (2 * sigma * sigma));
    kernel[i + radius] = w;
    sum += w;
  }
  for (let i = 0; i < kernel.length; i++) {
    kernel[i] /= sum;
  }

  const convolveAxis = (src: Float64Array, h: number, w: number, alongRows: boolean) => {
    const out = new Float64Array(src.length);
    for (let i = 0; i < h; i++) {
      for (let j = 0; j < w; j++) {
        let acc = 0;
        for (let t = -radius; t <= radius; t++) {
          let ii = i;
          let jj = j;
          if (alongRows) {
            jj = Math.min(w - 1, Math.max(0, j + t));
          } else {
            ii = Math.min(h - 1, Math.max(0, i + t));
          }
          acc += kernel[t + radius] * src[ii * w + jj];
        }
        out[i * w + j] = acc;
      }
    }
    return out;
  };

  return (grid) => {
    const pass1 = convolveAxis(grid.values, grid.height, grid.width, true);
    return convolveAxis(pass1, grid.height, grid.width, false);
  };
}

const dctMatrixCache = new Map<number, Float64Array>();

/** Orthonormal DCT-II matrix, rows are basis vectors; cached per size. */
function dctMatrix(n: number): Float64Array {
  const cached = dctMatrixCache.get(n);
  if (cached) return cached;
  const mat = new Float64Array(n * n);
  for (let k = 0; k < n; k++) {
    const scale = Math.sqrt((k === 0 ? 1 : 2) / n);
    for (let i = 0; i < n; i++) {
      mat[k * n + i] = scale * Math.cos((Math.PI * (2 * i + 1) * k) / (2 * n));
    }
  }
  dctMatrixCache.set(n, mat);
  return mat;
}

/** out = A (hA x wA) * B (wA x wB), all row-major. */
function matmul(a: Float64Array, b: Float64Array, hA: number, wA: number, wB: number): Float64Array {
  const out = new Float64Array(hA * wB);
  for (let i = 0; i < hA; i++) {
    for (let k = 0; k < wA; k++) {
      const aik = a[i * wA + k];
      if (aik === 0) continue;
      for (let j = 0; j < wB; j++) {
        out[i * wB + j] += aik * b[k * wB + j];
      }
    }
  }
  return out;
}

function transpose(a: Float64Array, h: number, w: number): Float64Array {
  const out = new Float64Array(h * w);
  for (let i = 0; i < h; i++) {
    for (let j = 0; j < w; j++) {
      out[j * h + i] = a[i * w + j];
    }
  }
  return out;
}

/**
 * Soft-thresholding of orthonormal cosine-transform coefficients at the
 * forwarded strength: the proximal map the solver's built-in denoiser
 * implements, reproduced independently here.
 */
export function dctSoftThresholdModel(): Model {
  return (grid, strength) => {
    const { height: h, width: w, values } = grid;
    const ch = dctMatrix(h);
    const cw = dctMatrix(w);
    // coeffs = C_h * V * C_w^T
    const coeffs = matmul(matmul(ch, values, h, h, w), transpose(cw, w, w), h, w, w);
    for (let i = 0; i < coeffs.length; i++) {
      const mag = Math.abs(coeffs[i]) - strength;
      coeffs[i] = mag > 0 ? (coeffs[i] < 0 ? -mag : mag) : 0;
    }
    // back: C_h^T * S * C_w
    return matmul(matmul(transpose(ch, h, h), coeffs, h, h, w), cw, h, w, w);
  };
}

/** Parse a model selector: identity | scale:<k> | blur:<sigma> | dct. */
export function createModel(spec: string): Model {
  if (spec === 'identity') return identityModel();
  if (spec === 'dct') return dctSoftThresholdModel();
  const [kind, arg] = spec.split(':', 2);
  if (kind === 'scale' && arg !== undefined) {
    const factor = Number(arg);
    if (!Number.isFinite(factor)) throw new Error(`bad scale factor ${arg}`);
    return scaleModel(factor);
  }
  if (kind === 'blur' && arg !== undefined) {
    const sigma = Number(arg);
    if (!Number.isFinite(sigma) || sigma <= 0) throw new Error(`bad blur sigma ${arg}`);
    return blurModel(sigma);
  }
  throw new Error(`unknown model ${JSON.stringify(spec)}`);
}
