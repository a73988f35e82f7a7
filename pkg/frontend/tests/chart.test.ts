import { describe, expect, it } from 'vitest';

import type { ProjectionPayload } from '../src/api.js';
import { curvePath, makeScale, projectionChartSvg, warningBand, xPixel, yPixel } from '../src/chart.js';

function projection(extrapolated: boolean): ProjectionPayload {
  return {
    fit: { a: 0.243, b: -2.61, r2: 0.983, pointCount: 5, xMin: 1.0e10, xMax: 3.8e10 },
    points: [
      { textCharacters: 1.0e10, repetitionPct: 2.97 },
      { textCharacters: 1.8e10, repetitionPct: 3.15 },
      { textCharacters: 3.8e10, repetitionPct: 3.29 },
    ],
    targetPct: extrapolated ? 5 : 3.2,
    requiredVolume: extrapolated
      ? { mantissa: 4.03, exponent: 13, decimalString: '4.03E+13', extrapolated: true }
      : { mantissa: 2.5, exponent: 10, decimalString: '2.50E+10', extrapolated: false },
  };
}

describe('scales', () => {
  it('x grows with ln(x), y grows downward', () => {
    const scale = makeScale(projection(true));
    expect(xPixel(scale, Math.log(2e10))).toBeGreaterThan(xPixel(scale, Math.log(1e10)));
    expect(yPixel(scale, 4)).toBeLessThan(yPixel(scale, 3));
  });

  it('scale covers the projected target volume', () => {
    const scale = makeScale(projection(true));
    const lnTarget = 13 * Math.LN10 + Math.log(4.03);
    expect(lnTarget).toBeLessThanOrEqual(scale.lnxMax);
  });
});

describe('fitted curve', () => {
  it('path has one segment per step and starts with a move', () => {
    const p = projection(true);
    const path = curvePath(p, makeScale(p), 16);
    expect(path.startsWith('M')).toBe(true);
    expect(path.match(/L/g)?.length).toBe(16);
  });

  it('curve y decreases in pixel space as x grows (positive slope)', () => {
    const p = projection(true);
    const scale = makeScale(p);
    const first = yPixel(scale, p.fit.a * scale.lnxMin + p.fit.b);
    const last = yPixel(scale, p.fit.a * scale.lnxMax + p.fit.b);
    expect(last).toBeLessThan(first);
  });
});

describe('warning band', () => {
  it('present when the chart extends past the fitted range', () => {
    const p = projection(true);
    const band = warningBand(p, makeScale(p));
    expect(band).not.toBeNull();
    expect(band!.width).toBeGreaterThan(0);
  });

  it('svg marks extrapolation region and label', () => {
    const svg = projectionChartSvg(projection(true));
    expect(svg).toContain('chart-warning-band');
    expect(svg).toContain('extrapolation');
  });

  it('svg contains the observed points and the target marker', () => {
    const svg = projectionChartSvg(projection(true));
    expect(svg.match(/chart-point/g)?.length).toBe(3);
    expect(svg).toContain('chart-target');
    expect(svg).toContain('4.03E+13');
  });
});
