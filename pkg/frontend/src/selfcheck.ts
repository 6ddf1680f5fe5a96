/**
 * Empirical firm-nonexpansiveness probe for the loaded model:
 * ||D(a) - D(b)||^2 <= <D(a) - D(b), a - b> + 1e-9 over seeded random pairs.
 * Informational only; a failing model reports violations, it does not error.
 */

import { Grid, Model } from './models.js';

export interface SelfcheckReport {
  violations: number;
  worstMargin: number;
  numPairs: number;
}

const TOLERANCE = 1e-9;

/** Small deterministic PRNG (mulberry32) so reports are reproducible. */
function makeRng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gaussPair(rng: () => number): [number, number] {
  const u = Math.max(rng(), 1e-12);
  const r = Math.sqrt(-2 * Math.log(u));
  const theta = 2 * Math.PI * rng();
  return [r * Math.cos(theta), r * Math.sin(theta)];
}

export function runSelfcheck(model: Model, numPairs: number, seed: number, size = 16): SelfcheckReport {
  const rng = makeRng(seed);
  const n = size * size;
  let violations = 0;
  let worst = -Infinity;

  for (let pair = 0; pair < numPairs; pair++) {
    const a = new Float64Array(n);
    const b = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      a[i] = rng();
    }
    for (let i = 0; i < n; i += 2) {
      const [g0, g1] = gaussPair(rng);
      b[i] = a[i] + 0.1 * g0;
      if (i + 1 < n) b[i + 1] = a[i + 1] + 0.1 * g1;
    }
    const gridA: Grid = { height: size, width: size, values: a };
    const gridB: Grid = { height: size, width: size, values: b };
    const da = model(gridA, 0.1);
    const db = model(gridB, 0.1);

    let sq = 0;
    let inner = 0;
    for (let i = 0; i < n; i++) {
      const d = da[i] - db[i];
      sq += d * d;
      inner += d * (a[i] - b[i]);
    }
    const margin = sq - inner;
    if (margin > TOLERANCE) violations += 1;
    if (margin > worst) worst = margin;
  }
  return { violations, worstMargin: worst, numPairs };
}
