import { apiBase, Client } from './api.js';
import { parseHash } from './router.js';
import { renderLandingPage } from './pages/landing.js';
import { renderTranslatePage } from './pages/translate.js';
import { renderDocumentInfoPage, renderDocumentsPage } from './pages/documents.js';
import { renderSentenceInfoPage, renderSentencesPage } from './pages/sentences.js';
import { renderMetricsPage } from './pages/metrics.js';

const client = new Client(apiBase());
const outlet = document.getElementById('app')!;

async function route(): Promise<void> {
  const { name, params } = parseHash(location.hash);
  try {
    switch (name) {
      case 'translate':
        await renderTranslatePage(outlet, client);
        break;
      case 'documents':
        await renderDocumentsPage(outlet, client);
        break;
      case 'document':
        await renderDocumentInfoPage(outlet, client, Number(params.id));
        break;
      case 'sentences':
        await renderSentencesPage(outlet, client);
        break;
      case 'sentence':
        await renderSentenceInfoPage(outlet, client, Number(params.id));
        break;
      case 'metrics':
        await renderMetricsPage(outlet, client);
        break;
      default:
        renderLandingPage(outlet);
    }
  } catch (error) {
    outlet.innerHTML = `<section class="page"><p class="error">${String(error)}</p></section>`;
  }
}

window.addEventListener('hashchange', () => void route());
void route();
