// @vitest-environment jsdom
//
// End-to-end: spawns the real API server (python backend) and drives the
// client and the translate page against it. Covers the half-covered
// example scenario (2 green / 2 red) and the contribute-then-refresh flow.

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it, vi } from 'vitest';

import { Client } from '../src/api.js';
import { renderTranslatePage } from '../src/pages/translate.js';
import { renderDocumentInfoPage, renderDocumentsPage } from '../src/pages/documents.js';
import { renderSentenceInfoPage, renderSentencesPage } from '../src/pages/sentences.js';
import { renderMetricsPage } from '../src/pages/metrics.js';

const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}/api/v1`;

const EXAMPLE_TEXT = [
  "When parrots do it, it's parroting.",
  "When children do it, it's imitation.",
  "When computers do it, it's AI.",
  "When parrots do it, it's parroting.",
  '',
].join('\n');

let server: ChildProcess | null = null;
let dataDir = '';
const client = new Client(BASE);

async function waitForServer(timeoutMs = 45_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const health = await client.health();
      if (health.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`server did not come up on :${PORT}: ${lastError}`);
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), 'sentbank-ui-'));
  server = spawn(
    'python3',
    ['-m', 'sentbank', '--data', dataDir, 'serve', '--port', String(PORT), '--host', '127.0.0.1'],
    { stdio: 'ignore' },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill('SIGTERM');
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe('live API', () => {
  it('ingests the example document and reports its stats', async () => {
    const upload = await client.uploadText('example', 'example.txt', 'en', EXAMPLE_TEXT);
    expect(upload.ingestStats).toEqual({ sentences: 4, newDistinct: 3, reusedDistinct: 1 });
  });

  it('exposes the repeated sentence through search', async () => {
    const page = await client.listSentences({ query: 'parroting' });
    expect(page.total).toBe(1);
    expect(page.items[0]!.occurrenceCount).toBe(2);
  });

  it('serves the worked-example metrics', async () => {
    const metrics = await client.metrics('example');
    expect(metrics.sentences).toBe(4);
    expect(metrics.distinctSentences).toBe(3);
    expect(metrics.textCharacters).toBe(140);
  });
});

describe('translate page against the live server', () => {
  async function submitExample(root: HTMLElement): Promise<void> {
    await renderTranslatePage(root, client);
    const textarea = root.querySelector<HTMLTextAreaElement>('textarea')!;
    textarea.value = EXAMPLE_TEXT;
    textarea.dispatchEvent(new Event('input', { bubbles: true }));
    root.querySelector('form')!.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    await vi.waitFor(() => expect(root.querySelectorAll('.segment').length).toBe(4), { timeout: 10_000 });
  }

  it('renders 2 green / 2 red once the repeated sentence has a translation', async () => {
    const found = await client.listSentences({ query: 'parroting' });
    await client.contribute(found.items[0]!.id, 'pt', 'Quando os papagaios o fazem.', 'ana');

    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app')! as HTMLElement;
    await submitExample(root);

    expect(root.querySelectorAll('.segment-translated').length).toBe(2);
    expect(root.querySelectorAll('.segment-missing').length).toBe(2);
    expect(root.textContent).toContain('50.00% covered');
  });

  it('contributing through a red segment turns it green after refresh', async () => {
    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app')! as HTMLElement;
    await submitExample(root);

    const missing = root.querySelector<HTMLLIElement>('.segment-missing')!;
    missing.click();
    const form = root.querySelector<HTMLFormElement>('.contribute-form')!;
    (form.elements.namedItem('translation') as HTMLInputElement).value = 'Quando as criancas o fazem.';
    (form.elements.namedItem('contributor') as HTMLInputElement).value = 'rui';
    form.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));

    await vi.waitFor(
      () => expect(root.querySelectorAll('.segment-translated').length).toBe(3),
      { timeout: 10_000 },
    );
    expect(root.querySelectorAll('.segment-missing').length).toBe(1);
  });

  it('voting reorders candidates through the live ranking', async () => {
    const found = await client.listSentences({ query: 'parroting' });
    const sentenceId = found.items[0]!.id;
    const second = await client.contribute(sentenceId, 'pt', 'Variante dos papagaios.', 'rui');
    await client.vote(second.id);
    await client.vote(second.id);
    const detail = await client.getSentence(sentenceId);
    expect(detail.translations[0]!.id).toBe(second.id);
  });
});

describe('browse pages against the live server', () => {
  it('documents page lists the ingested document', async () => {
    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app')! as HTMLElement;
    await renderDocumentsPage(root, client);
    expect(root.textContent).toContain('example.txt');
    expect(root.querySelectorAll('.listing tbody tr').length).toBe(1);
  });

  it('document info page shows MIME type, size, order and repeats', async () => {
    const docs = await client.listDocuments({ query: 'example' });
    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app')! as HTMLElement;
    await renderDocumentInfoPage(root, client, docs.items[0]!.id);
    expect(root.textContent).toContain('text/plain');
    expect(root.textContent).toContain('140 characters');
    expect(root.querySelectorAll('.doc-sentences li').length).toBe(4);
    expect(root.textContent).toContain('×2'); // repeated sentence count
  });

  it('sentences page searches and links to the info page', async () => {
    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app')! as HTMLElement;
    await renderSentencesPage(root, client, { query: 'parroting', minOccurrences: '', page: 1 });
    expect(root.querySelectorAll('.listing tbody tr').length).toBe(1);

    const found = await client.listSentences({ query: 'parroting' });
    await renderSentenceInfoPage(root, client, found.items[0]!.id);
    expect(root.textContent).toContain('occurrences');
    expect(root.textContent).toContain('example.txt');
    expect(root.querySelectorAll('.candidate').length).toBeGreaterThan(0);
  });

  it('metrics page shows API values without recomputation', async () => {
    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app')! as HTMLElement;
    await renderMetricsPage(root, client, { source: 'example', validOnly: false, targetPct: '5' });
    expect(root.textContent).toContain('#d.sentences with repetitions');
    expect(root.textContent).toContain('33.33%');
  });
});
