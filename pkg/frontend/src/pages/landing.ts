import { href } from '../router.js';

export function renderLandingPage(root: HTMLElement): void {
  root.innerHTML = `
    <section class="page page-landing">
      <h2>Search-only translation memory</h2>
      <p>
        Text is translated by exact sentence lookup: every sentence of your
        input is searched in a large index of previously ingested corpora,
        and stored crowd translations are returned when the whole sentence
        matches. Nothing is generated.
      </p>
      <nav class="landing-cards">
        <a class="card" href="${href('translate')}">
          <h3>Translate</h3>
          <p>Paste or upload plain text; see per-sentence coverage and contribute translations.</p>
        </a>
        <a class="card" href="${href('documents')}">
          <h3>Documents</h3>
          <p>Search the ingested documents and inspect how each was split into sentences.</p>
        </a>
        <a class="card" href="${href('sentences')}">
          <h3>Sentences</h3>
          <p>Search distinct sentences, their repetition counts and translations.</p>
        </a>
        <a class="card" href="${href('metrics')}">
          <h3>Metrics</h3>
          <p>Repetition statistics per source and the projected volume for target coverage.</p>
        </a>
      </nav>
    </section>`;
}
