// Segment presentation rules. Color is strictly a function of segment
// status (green = translated, red = missing) and is always paired with a
// text label so the status never relies on color alone.

import type { Segment, SegmentStatus, TranslationResult } from './api.js';

export function statusClass(status: SegmentStatus): string {
  return status === 'translated' ? 'segment-translated' : 'segment-missing';
}

export function statusLabel(status: SegmentStatus): string {
  return status === 'translated' ? 'translated' : 'missing';
}

export function bestCandidate(segment: Segment): string | null {
  const top = segment.candidates[0];
  return top ? top.text : null;
}

export function coverageText(result: TranslationResult): string {
  if (result.coveragePct === undefined) return 'no segments';
  const translated = result.segments.filter((s) => s.status === 'translated').length;
  return `${result.coveragePct.toFixed(2)}% covered (${translated}/${result.segments.length} segments)`;
}

export function countByStatus(result: TranslationResult): { translated: number; missing: number } {
  let translated = 0;
  let missing = 0;
  for (const segment of result.segments) {
    if (segment.status === 'translated') translated += 1;
    else missing += 1;
  }
  return { translated, missing };
}
