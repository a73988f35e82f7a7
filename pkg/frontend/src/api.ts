// Typed client for the /api/v1 endpoints. The UI never recomputes metric
// values client-side; everything rendered comes from these payloads.

export interface IngestStats {
  sentences: number;
  newDistinct: number;
  reusedDistinct: number;
}

export interface Candidate {
  id: number;
  sentenceId: number;
  targetLanguage: string;
  text: string;
  contributor: string;
  votes: number;
  createdAt: string;
}

export type SegmentStatus = 'translated' | 'missing';

export interface Segment {
  text: string;
  startOffset: number;
  status: SegmentStatus;
  sentenceId: number | null;
  candidates: Candidate[];
}

export interface TranslationResult {
  sourceLanguage: string;
  targetLanguage: string;
  coveragePct?: number;
  segments: Segment[];
}

export interface PageOf<T> {
  items: T[];
  page: number;
  pageSize: number;
  total: number;
}

export interface DocumentSummary {
  id: number;
  sourceTag: string;
  name: string;
  mimeType: string;
  textCharacterCount: number;
  textByteCount: number;
  createdAt: string;
  sentenceCount: number;
}

export interface DocumentSentenceRow {
  startOffset: number;
  sentenceId: number;
  text: string;
  occurrenceCount: number;
  documentsSample?: { id: number; name: string }[];
}

export interface DocumentDetail extends Omit<DocumentSummary, 'sentenceCount'> {
  sentences: DocumentSentenceRow[];
}

export interface SentenceSummary {
  id: number;
  text: string;
  language: string;
  md5: string;
  occurrenceCount: number;
}

export interface SentenceDetail extends SentenceSummary {
  documents: DocumentSummary[];
  translations: Candidate[];
}

export interface MetricsPayload {
  documents: number;
  textCharacters: number;
  textBytes: number;
  sentences: number;
  distinctSentences: number;
  dSentencesWithRepetitions: number;
  uniqueDSentences: number;
  validOnly: boolean;
  distinctPct?: number;
  withRepetitionsPct?: number;
  uniquePct?: number;
  nonUniquePct?: number;
  ruleSetVersion?: string;
}

export interface TrendFit {
  a: number;
  b: number;
  r2: number;
  pointCount: number;
  xMin: number;
  xMax: number;
}

export interface TrendPointPayload {
  textCharacters: number;
  repetitionPct: number;
}

export interface VolumeEstimate {
  mantissa: number;
  exponent: number;
  decimalString: string;
  extrapolated: boolean;
}

export interface ProjectionPayload {
  fit: TrendFit;
  points: TrendPointPayload[];
  targetPct: number;
  requiredVolume: VolumeEstimate;
}

export interface CommonMatrixPayload {
  sources: string[];
  matrix: number[][];
  allCommon: number;
}

export class ApiError extends Error {
  readonly code: string;
  readonly details?: Record<string, unknown>;

  constructor(code: string, message: string, details?: Record<string, unknown>) {
    super(message);
    this.code = code;
    this.details = details;
  }
}

function query(params: Record<string, string | number | boolean | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined && value !== '') search.set(key, String(value));
  }
  const encoded = search.toString();
  return encoded ? `?${encoded}` : '';
}

export class Client {
  constructor(readonly base: string = '/api/v1') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const err = (body as { error?: { code?: string; message?: string; details?: Record<string, unknown> } })?.error;
      throw new ApiError(err?.code ?? 'internal', err?.message ?? response.statusText, err?.details);
    }
    return body as T;
  }

  health(): Promise<{ ok: boolean }> {
    return this.request('/health');
  }

  translate(text: string, sourceLang: string, targetLang: string): Promise<TranslationResult> {
    return this.request('/translate', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text, sourceLang, targetLang }),
    });
  }

  uploadText(source: string, name: string, language: string, text: string): Promise<{ documentId: number; ingestStats: IngestStats }> {
    return this.request(`/documents${query({ source, name, language })}`, {
      method: 'POST',
      headers: { 'Content-Type': 'text/plain; charset=utf-8' },
      body: text,
    });
  }

  listDocuments(params: { query?: string; source?: string; page?: number; pageSize?: number } = {}): Promise<PageOf<DocumentSummary>> {
    return this.request(`/documents${query(params)}`);
  }

  getDocument(id: number): Promise<DocumentDetail> {
    return this.request(`/documents/${id}`);
  }

  documentContentUrl(id: number): string {
    return `${this.base}/documents/${id}/content`;
  }

  listSentences(params: { query?: string; language?: string; minOccurrences?: number; page?: number; pageSize?: number } = {}): Promise<PageOf<SentenceSummary>> {
    return this.request(`/sentences${query(params)}`);
  }

  getSentence(id: number): Promise<SentenceDetail> {
    return this.request(`/sentences/${id}`);
  }

  contribute(sentenceId: number, targetLang: string, text: string, contributor: string): Promise<Candidate> {
    return this.request(`/sentences/${sentenceId}/translations`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ targetLang, text, contributor }),
    });
  }

  vote(translationId: number): Promise<{ id: number; votes: number }> {
    return this.request(`/translations/${translationId}/vote`, { method: 'POST' });
  }

  metrics(scope?: string, validOnly = false): Promise<MetricsPayload> {
    return this.request(`/metrics${query({ scope, validOnly: validOnly || undefined })}`);
  }

  commonMatrix(sources: string[]): Promise<CommonMatrixPayload> {
    return this.request(`/metrics/common${query({ sources: sources.join(',') })}`);
  }

  limits(vocab: number, maxWords: number): Promise<Record<string, unknown>> {
    return this.request(`/limits${query({ vocab, maxWords })}`);
  }

  projection(targetPct: number, params: { validOnly?: boolean; source?: string; subsets?: number } = {}): Promise<ProjectionPayload> {
    return this.request(
      `/projection${query({ targetPct, validOnly: params.validOnly || undefined, source: params.source, subsets: params.subsets })}`,
    );
  }
}

export function apiBase(): string {
  const override =
    (globalThis as { SENTBANK_API?: string }).SENTBANK_API ??
    (typeof localStorage !== 'undefined' ? localStorage.getItem('sentbank.api') ?? undefined : undefined);
  return override ?? '/api/v1';
}
