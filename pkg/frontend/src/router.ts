export interface Route {
  name: string;
  params: Record<string, string>;
}

// Hash routes: #/  #/translate  #/documents  #/documents/7  #/sentences
// #/sentences/12  #/metrics
export function parseHash(hash: string): Route {
  const path = (hash.startsWith('#') ? hash.slice(1) : hash) || '/';
  const parts = path.split('/').filter(Boolean);
  if (parts.length === 0) return { name: 'landing', params: {} };
  const head = parts[0] ?? '';
  if (head === 'translate') return { name: 'translate', params: {} };
  if (head === 'metrics') return { name: 'metrics', params: {} };
  if (head === 'documents') {
    return parts[1] ? { name: 'document', params: { id: parts[1] } } : { name: 'documents', params: {} };
  }
  if (head === 'sentences') {
    return parts[1] ? { name: 'sentence', params: { id: parts[1] } } : { name: 'sentences', params: {} };
  }
  return { name: 'landing', params: {} };
}

export function href(route: string): string {
  return `#/${route.replace(/^\/+/, '')}`;
}
