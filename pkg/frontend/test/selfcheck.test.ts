import { describe, expect, it } from 'vitest';

import { createModel } from '../src/models.js';
import { runSelfcheck } from '../src/selfcheck.js';

describe('firm-nonexpansiveness selfcheck', () => {
  it('identity passes with zero margin', () => {
    const report = runSelfcheck(createModel('identity'), 100, 7);
    expect(report.violations).toBe(0);
    expect(report.worstMargin).toBeLessThanOrEqual(1e-15);
    expect(report.numPairs).toBe(100);
  });

  it('the doubling map fails on every pair', () => {
    const report = runSelfcheck(createModel('scale:2'), 100, 7);
    expect(report.violations).toBe(100);
    expect(report.worstMargin).toBeGreaterThan(0);
  });

  it('the transform-domain prox passes', () => {
    const report = runSelfcheck(createModel('dct'), 100, 7);
    expect(report.violations).toBe(0);
  });

  it('is deterministic for a fixed seed', () => {
    const a = runSelfcheck(createModel('blur:1.0'), 50, 3);
    const b = runSelfcheck(createModel('blur:1.0'), 50, 3);
    expect(a).toEqual(b);
  });
});
