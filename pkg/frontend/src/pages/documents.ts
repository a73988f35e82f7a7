// Document search page and single-document page.

import type { Client } from '../api.js';
import { esc, formatInt } from '../dom.js';
import { pagerHtml, wirePager, type PagerState } from '../pager.js';
import { href } from '../router.js';

export async function renderDocumentsPage(
  root: HTMLElement,
  client: Client,
  state: { query: string; source: string; page: number } = { query: '', source: '', page: 1 },
): Promise<void> {
  const pageSize = 20;
  const result = await client.listDocuments({
    query: state.query || undefined,
    source: state.source || undefined,
    page: state.page,
    pageSize,
  });
  const pager: PagerState = { page: result.page, pageSize: result.pageSize, total: result.total };

  root.innerHTML = `
    <section class="page page-documents">
      <h2>Documents</h2>
      <form class="search-form">
        <input name="query" placeholder="name contains..." value="${esc(state.query)}">
        <input name="source" placeholder="source tag" value="${esc(state.source)}">
        <button type="submit">search</button>
      </form>
      <table class="listing">
        <thead><tr><th>id</th><th>source</th><th>name</th><th>sentences</th><th>characters</th></tr></thead>
        <tbody>
          ${result.items
            .map(
              (d) => `<tr>
                <td>${d.id}</td>
                <td>${esc(d.sourceTag)}</td>
                <td><a href="${href(`documents/${d.id}`)}">${esc(d.name)}</a></td>
                <td>${formatInt(d.sentenceCount)}</td>
                <td>${formatInt(d.textCharacterCount)}</td>
              </tr>`,
            )
            .join('')}
        </tbody>
      </table>
      ${result.items.length === 0 ? '<p class="empty">no documents</p>' : ''}
      ${pagerHtml(pager)}
    </section>`;

  root.querySelector<HTMLFormElement>('.search-form')!.addEventListener('submit', (event) => {
    event.preventDefault();
    const query = root.querySelector<HTMLInputElement>('input[name=query]')!.value;
    const source = root.querySelector<HTMLInputElement>('input[name=source]')!.value;
    void renderDocumentsPage(root, client, { query, source, page: 1 });
  });
  wirePager(root, pager, (page) => void renderDocumentsPage(root, client, { ...state, page }));
}

export async function renderDocumentInfoPage(root: HTMLElement, client: Client, id: number): Promise<void> {
  const doc = await client.getDocument(id);
  root.innerHTML = `
    <section class="page page-document-info">
      <h2>Document: ${esc(doc.name)}</h2>
      <dl class="facts">
        <dt>source</dt><dd>${esc(doc.sourceTag)}</dd>
        <dt>MIME type</dt><dd>${esc(doc.mimeType)}</dd>
        <dt>size</dt><dd>${formatInt(doc.textCharacterCount)} characters / ${formatInt(doc.textByteCount)} bytes</dd>
        <dt>ingested</dt><dd>${esc(doc.createdAt)}</dd>
        <dt>download</dt><dd><a href="${client.documentContentUrl(doc.id)}" download="${esc(doc.name)}">plain text</a></dd>
      </dl>
      <h3>Sentences (${doc.sentences.length})</h3>
      <ol class="doc-sentences" start="0">
        ${doc.sentences
          .map(
            (s) => `<li value="${s.startOffset}">
              <a href="${href(`sentences/${s.sentenceId}`)}">${esc(s.text)}</a>
              <span class="occurrences">×${s.occurrenceCount}</span>
              ${
                s.documentsSample && s.documentsSample.length
                  ? `<span class="doc-sample">also in: ${s.documentsSample
                      .map((d) => `<a href="${href(`documents/${d.id}`)}">${esc(d.name)}</a>`)
                      .join(', ')}</span>`
                  : ''
              }
            </li>`,
          )
          .join('')}
      </ol>
    </section>`;
}
