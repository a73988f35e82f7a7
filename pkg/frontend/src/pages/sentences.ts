// Sentence search page and single-sentence page.

import type { Client } from '../api.js';
import { esc, formatInt } from '../dom.js';
import { pagerHtml, wirePager, type PagerState } from '../pager.js';
import { href } from '../router.js';

export async function renderSentencesPage(
  root: HTMLElement,
  client: Client,
  state: { query: string; minOccurrences: string; page: number } = { query: '', minOccurrences: '', page: 1 },
): Promise<void> {
  const result = await client.listSentences({
    query: state.query || undefined,
    minOccurrences: state.minOccurrences ? Number(state.minOccurrences) : undefined,
    page: state.page,
    pageSize: 20,
  });
  const pager: PagerState = { page: result.page, pageSize: result.pageSize, total: result.total };

  root.innerHTML = `
    <section class="page page-sentences">
      <h2>Sentences</h2>
      <form class="search-form">
        <input name="query" placeholder="text contains..." value="${esc(state.query)}">
        <input name="min" type="number" min="0" placeholder="min occurrences" value="${esc(state.minOccurrences)}">
        <button type="submit">search</button>
      </form>
      <table class="listing">
        <thead><tr><th>id</th><th>sentence</th><th>lang</th><th>occurrences</th></tr></thead>
        <tbody>
          ${result.items
            .map(
              (s) => `<tr>
                <td>${s.id}</td>
                <td><a href="${href(`sentences/${s.id}`)}">${esc(s.text)}</a></td>
                <td>${esc(s.language)}</td>
                <td>${formatInt(s.occurrenceCount)}</td>
              </tr>`,
            )
            .join('')}
        </tbody>
      </table>
      ${result.items.length === 0 ? '<p class="empty">no sentences</p>' : ''}
      ${pagerHtml(pager)}
    </section>`;

  root.querySelector<HTMLFormElement>('.search-form')!.addEventListener('submit', (event) => {
    event.preventDefault();
    void renderSentencesPage(root, client, {
      query: root.querySelector<HTMLInputElement>('input[name=query]')!.value,
      minOccurrences: root.querySelector<HTMLInputElement>('input[name=min]')!.value,
      page: 1,
    });
  });
  wirePager(root, pager, (page) => void renderSentencesPage(root, client, { ...state, page }));
}

export async function renderSentenceInfoPage(root: HTMLElement, client: Client, id: number): Promise<void> {
  const sentence = await client.getSentence(id);
  root.innerHTML = `
    <section class="page page-sentence-info">
      <h2>Sentence #${sentence.id}</h2>
      <blockquote class="sentence-text">${esc(sentence.text)}</blockquote>
      <dl class="facts">
        <dt>language</dt><dd>${esc(sentence.language)}</dd>
        <dt>md5</dt><dd><code>${esc(sentence.md5)}</code></dd>
        <dt>occurrences</dt><dd>${formatInt(sentence.occurrenceCount)}</dd>
      </dl>
      <h3>Appears in</h3>
      <ul class="containing-documents">
        ${sentence.documents
          .map((d) => `<li><a href="${href(`documents/${d.id}`)}">${esc(d.name)}</a> (${esc(d.sourceTag)})</li>`)
          .join('')}
      </ul>
      <h3>Translations</h3>
      ${
        sentence.translations.length
          ? `<ul class="candidates">${sentence.translations
              .map(
                (t) => `<li class="candidate">
                  <span class="candidate-text">${esc(t.text)}</span>
                  <span class="candidate-meta">${esc(t.targetLanguage)}, ${t.votes} votes, by ${esc(t.contributor)}</span>
                  <button class="vote-btn" data-id="${t.id}">+1</button>
                </li>`,
              )
              .join('')}</ul>`
          : '<p class="empty">none yet</p>'
      }
      <form class="contribute-form">
        <h3>Contribute a translation</h3>
        <label>target language <input name="lang" size="4" value="pt"></label>
        <label>translation <input name="translation" required></label>
        <label>display name <input name="contributor" required placeholder="your name"></label>
        <button type="submit">submit</button>
        <span class="contribute-note"></span>
      </form>
    </section>`;

  root.querySelectorAll<HTMLButtonElement>('.vote-btn').forEach((btn) => {
    btn.addEventListener('click', async () => {
      await client.vote(Number(btn.dataset.id));
      await renderSentenceInfoPage(root, client, id);
    });
  });
  root.querySelector<HTMLFormElement>('.contribute-form')!.addEventListener('submit', async (event) => {
    event.preventDefault();
    const form = event.currentTarget as HTMLFormElement;
    const lang = (form.elements.namedItem('lang') as HTMLInputElement).value.trim();
    const translation = (form.elements.namedItem('translation') as HTMLInputElement).value;
    const contributor = (form.elements.namedItem('contributor') as HTMLInputElement).value;
    try {
      await client.contribute(id, lang, translation, contributor);
      await renderSentenceInfoPage(root, client, id);
    } catch (error) {
      form.querySelector<HTMLSpanElement>('.contribute-note')!.textContent = String(error);
    }
  });
}
