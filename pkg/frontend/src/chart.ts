// SVG projection chart: observed points, the fitted curve y = a*ln(x) + b,
// and a shaded warning band over the region beyond the fitted x range
// (extrapolations there should not be trusted).
//
// The x axis is logarithmic, so the fitted curve renders as a straight
// line; values plotted are exactly the API's fit coefficients and points.

import type { ProjectionPayload } from './api.js';
import { esc } from './dom.js';

export interface ChartGeometry {
  width: number;
  height: number;
  margin: number;
}

const DEFAULT_GEOMETRY: ChartGeometry = { width: 680, height: 300, margin: 45 };

export interface ChartScale {
  lnxMin: number;
  lnxMax: number;
  yMin: number;
  yMax: number;
  geometry: ChartGeometry;
}

export function makeScale(projection: ProjectionPayload, geometry: ChartGeometry = DEFAULT_GEOMETRY): ChartScale {
  const { fit, points, requiredVolume, targetPct } = projection;
  const lnTarget = requiredVolume.exponent * Math.LN10 + Math.log(requiredVolume.mantissa);
  const lnxMin = Math.log(fit.xMin);
  const lnxMax = Math.max(Math.log(fit.xMax), lnTarget) + 0.5;
  const ys = points.map((p) => p.repetitionPct).concat([targetPct]);
  const spread = Math.max(...ys) - Math.min(...ys) || 1;
  return {
    lnxMin,
    lnxMax,
    yMin: Math.min(...ys) - 0.1 * spread,
    yMax: Math.max(...ys) + 0.1 * spread,
    geometry,
  };
}

export function xPixel(scale: ChartScale, lnx: number): number {
  const { width, margin } = scale.geometry;
  const t = (lnx - scale.lnxMin) / (scale.lnxMax - scale.lnxMin);
  return margin + t * (width - 2 * margin);
}

export function yPixel(scale: ChartScale, y: number): number {
  const { height, margin } = scale.geometry;
  const t = (y - scale.yMin) / (scale.yMax - scale.yMin);
  return height - margin - t * (height - 2 * margin);
}

export function curvePath(projection: ProjectionPayload, scale: ChartScale, steps = 64): string {
  const { a, b } = projection.fit;
  const parts: string[] = [];
  for (let i = 0; i <= steps; i += 1) {
    const lnx = scale.lnxMin + (i / steps) * (scale.lnxMax - scale.lnxMin);
    const x = xPixel(scale, lnx);
    const y = yPixel(scale, a * lnx + b);
    parts.push(`${i === 0 ? 'M' : 'L'}${x.toFixed(1)},${y.toFixed(1)}`);
  }
  return parts.join(' ');
}

export function warningBand(projection: ProjectionPayload, scale: ChartScale): { x: number; width: number } | null {
  const lnFitMax = Math.log(projection.fit.xMax);
  if (lnFitMax >= scale.lnxMax) return null;
  const left = xPixel(scale, lnFitMax);
  const right = xPixel(scale, scale.lnxMax);
  return { x: left, width: right - left };
}

export function projectionChartSvg(projection: ProjectionPayload, geometry: ChartGeometry = DEFAULT_GEOMETRY): string {
  const scale = makeScale(projection, geometry);
  const { width, height, margin } = geometry;
  const band = warningBand(projection, scale);
  const dots = projection.points
    .map((p) => {
      const cx = xPixel(scale, Math.log(p.textCharacters));
      const cy = yPixel(scale, p.repetitionPct);
      return `<circle cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="4" class="chart-point"><title>${esc(
        `${p.textCharacters.toExponential(2)} chars, ${p.repetitionPct.toFixed(2)}%`,
      )}</title></circle>`;
    })
    .join('');
  const lnTarget =
    projection.requiredVolume.exponent * Math.LN10 + Math.log(projection.requiredVolume.mantissa);
  const targetX = xPixel(scale, lnTarget);
  const targetY = yPixel(scale, projection.targetPct);

  return `<svg class="projection-chart" viewBox="0 0 ${width} ${height}" role="img"
    aria-label="repetition percentage vs corpus characters with fitted logarithmic curve">
  ${band ? `<rect class="chart-warning-band" x="${band.x.toFixed(1)}" y="${margin}" width="${band.width.toFixed(1)}" height="${height - 2 * margin}"><title>extrapolated beyond the fitted range</title></rect>` : ''}
  <line class="chart-axis" x1="${margin}" y1="${height - margin}" x2="${width - margin}" y2="${height - margin}"/>
  <line class="chart-axis" x1="${margin}" y1="${margin}" x2="${margin}" y2="${height - margin}"/>
  <path class="chart-curve" d="${curvePath(projection, scale)}"/>
  ${dots}
  <circle class="chart-target" cx="${targetX.toFixed(1)}" cy="${targetY.toFixed(1)}" r="5">
    <title>${esc(`target ${projection.targetPct.toFixed(2)}% at ${projection.requiredVolume.decimalString} chars`)}</title>
  </circle>
  <text class="chart-label" x="${margin}" y="${margin - 12}">%d.sentences with repetitions vs #text characters (log x)</text>
  ${band ? `<text class="chart-label chart-warning-label" x="${(band.x + 6).toFixed(1)}" y="${margin + 16}">extrapolation</text>` : ''}
</svg>`;
}
