// Thin fetch client for the review service. The only mutating call is the
// decision POST; everything else is read-only.

import type { DecisionBody, MetricsPayload, PairItem, PairsPage, PairStatus } from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function toError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === 'string') detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private base: string = '') {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) throw await toError(response);
    return (await response.json()) as T;
  }

  listPairs(status?: PairStatus, page = 1, pageSize = 50): Promise<PairsPage> {
    const params = new URLSearchParams({ page: String(page), page_size: String(pageSize) });
    if (status) params.set('status', status);
    return this.get<PairsPage>(`/pairs?${params.toString()}`);
  }

  getPair(id: string): Promise<PairItem> {
    return this.get<PairItem>(`/pairs/${encodeURIComponent(id)}`);
  }

  metrics(): Promise<MetricsPayload> {
    return this.get<MetricsPayload>('/metrics');
  }

  async decide(id: string, body: DecisionBody): Promise<PairItem> {
    const response = await fetch(`${this.base}/pairs/${encodeURIComponent(id)}/decision`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await toError(response);
    const payload = (await response.json()) as { item: PairItem };
    return payload.item;
  }
}
