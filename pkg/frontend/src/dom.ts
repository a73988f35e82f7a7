export function esc(value: unknown): string {
  return String(value).replace(/[&<>'"]/g, (c) => `&${({ '&': 'amp', '<': 'lt', '>': 'gt', "'": 'apos', '"': 'quot' } as Record<string, string>)[c]};`);
}

export function formatInt(value: number): string {
  return value.toLocaleString('en-US');
}

export function formatPct(value: number | undefined): string {
  return value === undefined ? '-' : `${value.toFixed(2)}%`;
}
