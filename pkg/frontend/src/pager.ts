// Pagination state shared by the search pages; mirrors the API paging
// parameters exactly (1-based page, pageSize, server-reported total).

export interface PagerState {
  page: number;
  pageSize: number;
  total: number;
}

export function hasPrev(state: PagerState): boolean {
  return state.page > 1;
}

export function hasNext(state: PagerState): boolean {
  return state.page * state.pageSize < state.total;
}

export function pageCount(state: PagerState): number {
  return Math.max(1, Math.ceil(state.total / state.pageSize));
}

export function clampPage(page: number, state: PagerState): number {
  return Math.min(Math.max(1, page), pageCount(state));
}

export function pagerHtml(state: PagerState): string {
  return `
    <nav class="pager">
      <button class="pager-prev" ${hasPrev(state) ? '' : 'disabled'}>&laquo; prev</button>
      <span class="pager-status">page ${state.page} of ${pageCount(state)} (${state.total} items)</span>
      <button class="pager-next" ${hasNext(state) ? '' : 'disabled'}>next &raquo;</button>
    </nav>`;
}

export function wirePager(root: ParentNode, state: PagerState, onPage: (page: number) => void): void {
  root.querySelector<HTMLButtonElement>('.pager-prev')?.addEventListener('click', () => {
    if (hasPrev(state)) onPage(state.page - 1);
  });
  root.querySelector<HTMLButtonElement>('.pager-next')?.addEventListener('click', () => {
    if (hasNext(state)) onPage(state.page + 1);
  });
}
