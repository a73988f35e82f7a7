// Translate page: paste or upload plain text, submit, and read the result
// as a list of highlighted segments. Clicking a missing (red) segment opens
// the contribute form; clicking a translated (green) one shows the ranked
// candidates with vote buttons.

import type { Client, TranslationResult } from '../api.js';
import { ApiError } from '../api.js';
import { esc } from '../dom.js';
import { bestCandidate, coverageText, statusClass, statusLabel } from '../segments.js';

export interface TranslatePageState {
  result: TranslationResult | null;
  lastText: string;
  sourceLang: string;
  targetLang: string;
  openSegment: number | null;
}

export function segmentHtml(result: TranslationResult): string {
  return result.segments
    .map((segment) => {
      const best = bestCandidate(segment);
      return `
      <li class="segment ${statusClass(segment.status)}" data-offset="${segment.startOffset}">
        <span class="segment-text">${esc(segment.text)}</span>
        <span class="segment-status-label">[${statusLabel(segment.status)}]</span>
        ${best ? `<span class="segment-best">→ ${esc(best)}</span>` : ''}
      </li>`;
    })
    .join('');
}

function candidatesHtml(result: TranslationResult, offset: number): string {
  const segment = result.segments[offset];
  if (!segment) return '';
  const rows = segment.candidates
    .map(
      (candidate) => `
      <li class="candidate" data-id="${candidate.id}">
        <span class="candidate-text">${esc(candidate.text)}</span>
        <span class="candidate-meta">${candidate.votes} votes, by ${esc(candidate.contributor)}</span>
        <button class="vote-btn" data-id="${candidate.id}">+1</button>
      </li>`,
    )
    .join('');
  return `<ul class="candidates">${rows}</ul>`;
}

function contributeFormHtml(segmentText: string): string {
  return `
    <form class="contribute-form">
      <p>No stored translation for: <strong>${esc(segmentText)}</strong></p>
      <label>translation <input name="translation" required></label>
      <label>display name <input name="contributor" required placeholder="your name"></label>
      <button type="submit">contribute</button>
      <span class="contribute-note"></span>
    </form>`;
}

export async function renderTranslatePage(root: HTMLElement, client: Client, state?: TranslatePageState): Promise<TranslatePageState> {
  const page: TranslatePageState = state ?? {
    result: null,
    lastText: '',
    sourceLang: 'en',
    targetLang: 'pt',
    openSegment: null,
  };

  root.innerHTML = `
    <section class="page page-translate">
      <h2>Translate</h2>
      <form class="translate-form">
        <textarea name="text" rows="8" placeholder="Paste plain text to translate...">${esc(page.lastText)}</textarea>
        <div class="translate-controls">
          <label>from <input name="source" size="4" value="${esc(page.sourceLang)}"></label>
          <label>to <input name="target" size="4" value="${esc(page.targetLang)}"></label>
          <input type="file" name="file" accept="text/plain,.txt">
          <button type="submit" ${page.lastText.trim() ? '' : 'disabled'}>translate</button>
        </div>
        <p class="translate-error" role="alert"></p>
      </form>
      <div class="translate-result">
        ${page.result ? `<p class="coverage">${esc(coverageText(page.result))}</p><ul class="segments">${segmentHtml(page.result)}</ul>` : ''}
        <div class="segment-detail"></div>
      </div>
    </section>`;

  const form = root.querySelector<HTMLFormElement>('.translate-form')!;
  const textarea = form.querySelector<HTMLTextAreaElement>('textarea')!;
  const fileInput = form.querySelector<HTMLInputElement>('input[name=file]')!;
  const submit = form.querySelector<HTMLButtonElement>('button[type=submit]')!;
  const errorLine = form.querySelector<HTMLParagraphElement>('.translate-error')!;
  const detail = root.querySelector<HTMLDivElement>('.segment-detail')!;

  textarea.addEventListener('input', () => {
    submit.disabled = textarea.value.trim() === '';
  });

  fileInput.addEventListener('change', async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    // Mirror the server rule client-side: plain text only.
    if (file.type && file.type !== 'text/plain') {
      errorLine.textContent = `only plain text files can be translated (got ${file.type})`;
      fileInput.value = '';
      return;
    }
    textarea.value = await file.text();
    submit.disabled = textarea.value.trim() === '';
    errorLine.textContent = '';
  });

  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const text = textarea.value;
    if (!text.trim()) return;
    page.sourceLang = form.querySelector<HTMLInputElement>('input[name=source]')!.value.trim();
    page.targetLang = form.querySelector<HTMLInputElement>('input[name=target]')!.value.trim();
    try {
      page.result = await client.translate(text, page.sourceLang, page.targetLang);
      page.lastText = text;
      page.openSegment = null;
      await renderTranslatePage(root, client, page);
    } catch (error) {
      errorLine.textContent = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    }
  });

  root.querySelectorAll<HTMLLIElement>('.segment').forEach((item) => {
    item.addEventListener('click', () => {
      const offset = Number(item.dataset.offset);
      const segment = page.result?.segments[offset];
      if (!segment || !page.result) return;
      page.openSegment = offset;
      if (segment.status === 'translated') {
        detail.innerHTML = candidatesHtml(page.result, offset);
        detail.querySelectorAll<HTMLButtonElement>('.vote-btn').forEach((btn) => {
          btn.addEventListener('click', async () => {
            await client.vote(Number(btn.dataset.id));
            page.result = await client.translate(page.lastText, page.sourceLang, page.targetLang);
            await renderTranslatePage(root, client, page);
          });
        });
      } else {
        detail.innerHTML = contributeFormHtml(segment.text);
        const contributeForm = detail.querySelector<HTMLFormElement>('.contribute-form')!;
        contributeForm.addEventListener('submit', async (event) => {
          event.preventDefault();
          const translation = (contributeForm.elements.namedItem('translation') as HTMLInputElement).value;
          const contributor = (contributeForm.elements.namedItem('contributor') as HTMLInputElement).value;
          const note = contributeForm.querySelector<HTMLSpanElement>('.contribute-note')!;
          if (segment.sentenceId == null) {
            note.textContent = 'sentence is not stored in the memory yet; it cannot be translated';
            return;
          }
          try {
            await client.contribute(segment.sentenceId, page.targetLang, translation, contributor);
            // Optimistic refresh: re-run the search so the segment turns green.
            page.result = await client.translate(page.lastText, page.sourceLang, page.targetLang);
            await renderTranslatePage(root, client, page);
          } catch (error) {
            note.textContent = error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
          }
        });
      }
    });
  });

  return page;
}
