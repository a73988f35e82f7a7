// Metrics dashboard: per-source corpus metrics plus the projection chart
// with the fitted logarithmic curve and extrapolation warning band. All
// numbers come from the API; this page only formats them.

import type { Client, MetricsPayload } from '../api.js';
import { ApiError } from '../api.js';
import { projectionChartSvg } from '../chart.js';
import { esc, formatInt, formatPct } from '../dom.js';

const METRIC_ROWS: [string, (m: MetricsPayload) => string][] = [
  ['#documents', (m) => formatInt(m.documents)],
  ['#text characters (UTF-8)', (m) => formatInt(m.textCharacters)],
  ['#sentences', (m) => formatInt(m.sentences)],
  ['#distinct sentences', (m) => formatInt(m.distinctSentences)],
  ['#distinct sentences %', (m) => formatPct(m.distinctPct)],
  ['#d.sentences with repetitions', (m) => formatInt(m.dSentencesWithRepetitions)],
  ['#d.sentences with repetitions %', (m) => formatPct(m.withRepetitionsPct)],
  ['#unique d.sentences', (m) => formatInt(m.uniqueDSentences)],
  ['#unique d.sentences %', (m) => formatPct(m.uniquePct)],
  ['#non-unique sentences %', (m) => formatPct(m.nonUniquePct)],
];

export function metricsTableHtml(metrics: MetricsPayload): string {
  return `<table class="metrics-table"><tbody>
    ${METRIC_ROWS.map(([label, value]) => `<tr><td>${esc(label)}</td><td class="num">${value(metrics)}</td></tr>`).join('')}
  </tbody></table>`;
}

export async function renderMetricsPage(
  root: HTMLElement,
  client: Client,
  state: { source: string; validOnly: boolean; targetPct: string } = { source: '', validOnly: false, targetPct: '5' },
): Promise<void> {
  let metrics: MetricsPayload | null = null;
  let metricsError = '';
  try {
    metrics = await client.metrics(state.source || undefined, state.validOnly);
  } catch (error) {
    metricsError = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
  }

  let chartHtml = '';
  let projectionLine = '';
  try {
    const projection = await client.projection(Number(state.targetPct) || 5, {
      source: state.source || undefined,
      validOnly: state.validOnly,
    });
    const warning = projection.requiredVolume.extrapolated
      ? ' <strong class="warning">(extrapolated beyond the fitted range; treat with caution)</strong>'
      : '';
    projectionLine = `<p class="projection-line">fit r²=${projection.fit.r2.toFixed(4)} over ${projection.fit.pointCount} snapshots;
      reaching ${Number(state.targetPct).toFixed(2)}% needs ~${esc(projection.requiredVolume.decimalString)} characters${warning}</p>`;
    chartHtml = projectionChartSvg(projection);
  } catch (error) {
    projectionLine = `<p class="projection-line empty">projection unavailable: ${esc(
      error instanceof ApiError ? error.message : String(error),
    )}</p>`;
  }

  root.innerHTML = `
    <section class="page page-metrics">
      <h2>Metrics</h2>
      <form class="metrics-form">
        <label>source <input name="source" placeholder="all sources" value="${esc(state.source)}"></label>
        <label><input type="checkbox" name="validOnly" ${state.validOnly ? 'checked' : ''}> valid sentences only</label>
        <label>target % <input name="target" size="5" value="${esc(state.targetPct)}"></label>
        <button type="submit">refresh</button>
      </form>
      ${metrics ? metricsTableHtml(metrics) : `<p class="empty">${esc(metricsError)}</p>`}
      ${metrics?.validOnly && metrics.ruleSetVersion ? `<p class="rule-set">rule set ${esc(metrics.ruleSetVersion)}</p>` : ''}
      <h3>Repetition growth projection</h3>
      ${projectionLine}
      ${chartHtml}
    </section>`;

  root.querySelector<HTMLFormElement>('.metrics-form')!.addEventListener('submit', (event) => {
    event.preventDefault();
    void renderMetricsPage(root, client, {
      source: root.querySelector<HTMLInputElement>('input[name=source]')!.value.trim(),
      validOnly: root.querySelector<HTMLInputElement>('input[name=validOnly]')!.checked,
      targetPct: root.querySelector<HTMLInputElement>('input[name=target]')!.value.trim(),
    });
  });
}
