// Test doubles: a strict replay mock (serves recorded backend responses in
// order) and a minimal stateful fake for behavior tests.

import type { MetricsPayload, PairItem } from '../src/types';

export interface RecordedInteraction {
  method: string;
  path: string;
  request_body: unknown;
  status: number;
  response: unknown;
}

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

/** Replay fetch: consumes recorded interactions per method+path, in order.
 *  Throws on any request the recording does not contain. */
export function replayFetch(interactions: RecordedInteraction[]) {
  const queues = new Map<string, RecordedInteraction[]>();
  for (const interaction of interactions) {
    const key = `${interaction.method} ${interaction.path}`;
    const queue = queues.get(key) ?? [];
    queue.push(interaction);
    queues.set(key, queue);
  }
  const unexpected: string[] = [];

  const fetchImpl = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === 'string' ? input : input.toString();
    const method = init?.method ?? 'GET';
    const key = `${method} ${url}`;
    const queue = queues.get(key);
    const next = queue?.shift();
    if (!next) {
      unexpected.push(key);
      throw new Error(`no recorded interaction for ${key}`);
    }
    if (method === 'POST' && next.request_body !== null) {
      const sent = init?.body ? JSON.parse(String(init.body)) : null;
      if (JSON.stringify(sent) !== JSON.stringify(next.request_body)) {
        unexpected.push(`${key} body ${JSON.stringify(sent)}`);
        throw new Error(
          `body mismatch for ${key}: sent ${JSON.stringify(sent)}, recorded ${JSON.stringify(next.request_body)}`,
        );
      }
    }
    return jsonResponse(structuredClone(next.response), next.status);
  };

  const remaining = () =>
    [...queues.entries()].flatMap(([key, queue]) => queue.map(() => key));

  return { fetchImpl, remaining, unexpected };
}

/** Small stateful fake service for behavior tests (no metric math: the
 *  metrics payloads are fixed inputs, as the client must treat them). */
export function fakeService(items: PairItem[], metrics: MetricsPayload) {
  const state = new Map(items.map((item) => [item.id, structuredClone(item)]));
  const posts: Array<{ id: string; body: unknown }> = [];

  const fetchImpl = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === 'string' ? input : input.toString();
    const method = init?.method ?? 'GET';
    const pending = [...state.values()]
      .filter((item) => item.status === 'pending')
      .sort((a, b) => b.candidates.length - a.candidates.length || a.id.localeCompare(b.id));

    if (method === 'GET' && url.startsWith('/pairs?')) {
      const params = new URLSearchParams(url.split('?')[1]);
      const page = Number(params.get('page') ?? '1');
      const pageSize = Number(params.get('page_size') ?? '20');
      const start = (page - 1) * pageSize;
      return jsonResponse({
        items: pending.slice(start, start + pageSize),
        total: pending.length,
        page,
        page_size: pageSize,
      });
    }
    const decision = url.match(/^\/pairs\/([^/]+)\/decision$/);
    if (method === 'POST' && decision) {
      const item = state.get(decodeURIComponent(decision[1]));
      if (!item) return jsonResponse({ detail: 'no such pair' }, 404);
      if (item.status !== 'pending') return jsonResponse({ detail: 'already decided' }, 409);
      const body = init?.body ? JSON.parse(String(init.body)) : {};
      posts.push({ id: item.id, body });
      if (Array.isArray(body.accept) && body.accept.length > 0) {
        item.status = 'accepted';
        item.accepted = body.accept;
      } else if (body.reject) {
        item.status = 'rejected';
      } else {
        return jsonResponse({ detail: 'malformed decision' }, 400);
      }
      return jsonResponse({ item });
    }
    const single = url.match(/^\/pairs\/([^/?]+)$/);
    if (method === 'GET' && single) {
      const item = state.get(decodeURIComponent(single[1]));
      return item ? jsonResponse(item) : jsonResponse({ detail: 'no such pair' }, 404);
    }
    if (method === 'GET' && url === '/metrics') {
      return jsonResponse(structuredClone(metrics));
    }
    return jsonResponse({ detail: `unhandled ${method} ${url}` }, 500);
  };

  return { fetchImpl, state, posts };
}

export function makeItem(id: string, candidateCount: number, wat = 0.91): PairItem {
  return {
    id,
    source_id: id,
    source_raw: `Source ${id}`,
    source_tokens: ['source', id.toLowerCase()],
    candidates: Array.from({ length: candidateCount }, (_, j) => ({
      dest_id: `${id}-D${j}`,
      dest_raw: `Dest ${id}.${j}`,
      dest_tokens: ['dest', String(j)],
      wat: wat - j * 0.07,
      at: 0.8 - j * 0.05,
      edit_distance: j,
      relax_level: j % 3,
      alignment: [
        { source_token: 'source', dest_token: 'dest', sim: 0.5 },
        { source_token: id.toLowerCase(), dest_token: null, sim: 0 },
      ],
    })),
    status: 'pending',
    accepted: [],
    decided_by: null,
    decided_at: null,
  };
}

export const EMPTY_METRICS: MetricsPayload = {
  decided: 0,
  unreviewed: 3,
  pending_by_multiplicity: { '1': 1, '2': 2 },
  report: null,
  matrix: null,
};

export async function flush(times = 8): Promise<void> {
  for (let i = 0; i < times; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
