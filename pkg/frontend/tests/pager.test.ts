import { describe, expect, it } from 'vitest';

import { clampPage, hasNext, hasPrev, pageCount, pagerHtml } from '../src/pager.js';

describe('pager state', () => {
  it('first page has no prev', () => {
    expect(hasPrev({ page: 1, pageSize: 20, total: 100 })).toBe(false);
    expect(hasPrev({ page: 2, pageSize: 20, total: 100 })).toBe(true);
  });

  it('last page has no next', () => {
    expect(hasNext({ page: 5, pageSize: 20, total: 100 })).toBe(false);
    expect(hasNext({ page: 4, pageSize: 20, total: 100 })).toBe(true);
  });

  it('partial last page counts', () => {
    expect(pageCount({ page: 1, pageSize: 20, total: 41 })).toBe(3);
    expect(hasNext({ page: 3, pageSize: 20, total: 41 })).toBe(false);
  });

  it('empty listing is a single page', () => {
    const s = { page: 1, pageSize: 20, total: 0 };
    expect(pageCount(s)).toBe(1);
    expect(hasNext(s)).toBe(false);
    expect(hasPrev(s)).toBe(false);
  });

  it('clamps out-of-range pages', () => {
    const s = { page: 1, pageSize: 10, total: 35 };
    expect(clampPage(0, s)).toBe(1);
    expect(clampPage(99, s)).toBe(4);
  });

  it('renders disabled controls at the edges', () => {
    const html = pagerHtml({ page: 1, pageSize: 20, total: 10 });
    expect(html).toContain('pager-prev');
    expect(html.match(/disabled/g)?.length).toBe(2);
  });
});
