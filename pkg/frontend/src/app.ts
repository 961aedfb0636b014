// Single-page review client: a queue screen, a one-pair decide screen and a
// live metrics panel. All numbers shown come verbatim from the API.

import { ApiClient, ApiError } from './api';
import type { Candidate, MetricsPayload, PairItem } from './types';

// Metrics the panel displays, in order, keyed into report.percent.
const PANEL_METRICS: Array<[string, string]> = [
  ['tpp', 'True positives'],
  ['vtnp', 'Verified true negatives'],
  ['etpap', 'Extended TP accuracy'],
  ['otpa', 'Overall TP accuracy'],
  ['effectiveness', 'Effectiveness'],
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === 'class') node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function simClass(sim: number): string {
  if (sim >= 0.999) return 'sim-exact';
  if (sim >= 0.5) return 'sim-strong';
  if (sim > 0) return 'sim-weak';
  return 'sim-none';
}

export class App {
  private view: 'queue' | 'pair' = 'queue';
  private pending: PairItem[] = [];
  private page = 1;
  private totalPending = 0;
  private readonly pageSize = 100;
  private current: PairItem | null = null;
  private metrics: MetricsPayload | null = null;
  private metricsStale = false;
  private connectionError = false;
  private notice: string | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private pollMs = 5000,
  ) {}

  async start(): Promise<void> {
    await this.refresh();
    if (this.pollMs > 0) {
      this.pollTimer = setInterval(() => void this.refreshMetrics(), this.pollMs);
    }
  }

  stop(): void {
    if (this.pollTimer !== null) clearInterval(this.pollTimer);
  }

  async refresh(): Promise<void> {
    await Promise.all([this.refreshQueue(), this.refreshMetrics()]);
    this.render();
  }

  private async refreshQueue(): Promise<void> {
    try {
      const result = await this.api.listPairs('pending', this.page, this.pageSize);
      this.pending = result.items;
      this.totalPending = result.total;
      // A drained page past the end falls back to the last non-empty one.
      if (result.items.length === 0 && this.page > 1) {
        this.page -= 1;
        await this.refreshQueue();
      }
      this.connectionError = false;
    } catch {
      this.connectionError = true;
    }
  }

  async goToPage(page: number): Promise<void> {
    this.page = Math.max(1, page);
    await this.refreshQueue();
    this.render();
  }

  private async refreshMetrics(): Promise<void> {
    try {
      this.metrics = await this.api.metrics();
      this.metricsStale = false;
    } catch {
      this.metricsStale = true;
    }
    this.renderMetricsPanel();
  }

  async openPair(id: string, keepNotice = false): Promise<void> {
    try {
      this.current = await this.api.getPair(id);
      this.view = 'pair';
      if (!keepNotice) this.notice = null;
    } catch (error) {
      this.notice = error instanceof ApiError ? error.message : 'Failed to load pair.';
    }
    this.render();
  }

  async submitDecision(accepted: string[]): Promise<void> {
    if (!this.current) return;
    const body = accepted.length > 0 ? { accept: accepted } : { reject: true as const };
    try {
      await this.api.decide(this.current.id, body);
      this.notice = null;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.notice = `Pair ${this.current.id} was already decided by another reviewer.`;
      } else {
        this.notice = error instanceof ApiError ? error.message : 'Decision failed.';
      }
    }
    await this.refreshQueue();
    await this.refreshMetrics();
    const next = this.pending.find((item) => item.id !== this.current?.id);
    if (next) {
      await this.openPair(next.id, true);
    } else {
      this.view = 'queue';
      this.current = null;
      this.render();
    }
  }

  // Rendering ---------------------------------------------------------------

  render(): void {
    this.root.textContent = '';
    const header = el('header', {}, [
      el('h1', {}, ['Clerical review']),
      el('p', { class: 'subtitle' }, ['Possible matches awaiting a human decision']),
    ]);
    const main = el('main', {});
    const banner = this.connectionError
      ? 'Cannot reach the review service. Retry when it is back.'
      : this.notice;
    if (banner) {
      main.append(el('div', { class: 'banner', 'data-testid': 'banner' }, [banner]));
    }
    main.append(this.view === 'pair' && this.current ? this.renderPair(this.current) : this.renderQueue());
    const aside = el('aside', { 'data-testid': 'metrics-panel' });
    this.root.append(header, main, aside);
    this.renderMetricsPanel();
  }

  private renderQueue(): HTMLElement {
    const section = el('section', { 'data-testid': 'queue-screen' });
    section.append(el('h2', {}, ['Pending pairs']));
    if (this.pending.length === 0) {
      section.append(
        el('p', { class: 'empty', 'data-testid': 'empty-queue' }, ['No pending pairs.']),
      );
      return section;
    }
    const table = el('table', { class: 'queue' });
    table.append(
      el('thead', {}, [
        el('tr', {}, [
          el('th', {}, ['Source']),
          el('th', {}, ['Suggestions']),
          el('th', {}, ['Top score']),
          el('th', {}, ['']),
        ]),
      ]),
    );
    const body = el('tbody');
    for (const item of this.pending) {
      const top = item.candidates[0];
      const open = el('button', { 'data-testid': `open-${item.id}` }, ['Review']);
      open.addEventListener('click', () => void this.openPair(item.id));
      body.append(
        el('tr', { 'data-testid': `queue-row-${item.id}` }, [
          el('td', {}, [item.source_raw]),
          el('td', { class: 'num' }, [String(item.candidates.length)]),
          el('td', { class: 'num', 'data-testid': `top-wat-${item.id}` }, [
            top ? String(top.wat) : '',
          ]),
          el('td', {}, [open]),
        ]),
      );
    }
    table.append(body);
    section.append(table);
    const pages = Math.max(1, Math.ceil(this.totalPending / this.pageSize));
    if (pages > 1) {
      const prev = el('button', { 'data-testid': 'page-prev' }, ['Previous']);
      prev.disabled = this.page <= 1;
      prev.addEventListener('click', () => void this.goToPage(this.page - 1));
      const next = el('button', { 'data-testid': 'page-next' }, ['Next']);
      next.disabled = this.page >= pages;
      next.addEventListener('click', () => void this.goToPage(this.page + 1));
      section.append(
        el('div', { class: 'pager' }, [
          prev,
          el('span', { 'data-testid': 'page-label' }, [`page ${this.page} of ${pages}`]),
          next,
        ]),
      );
    }
    return section;
  }

  private renderPair(item: PairItem): HTMLElement {
    const section = el('section', { 'data-testid': 'decide-screen' });
    section.append(
      el('h2', {}, [`Source: ${item.source_raw}`]),
      el(
        'div',
        { class: 'tokens' },
        item.source_tokens.map((token) => el('span', { class: 'token' }, [token])),
      ),
    );
    const boxes: HTMLInputElement[] = [];
    for (const candidate of item.candidates) {
      const { card, checkbox } = this.renderCandidate(item, candidate);
      boxes.push(checkbox);
      section.append(card);
    }
    const accept = el('button', { class: 'accept', 'data-testid': 'accept-selected' }, [
      'Accept selected',
    ]);
    accept.addEventListener('click', () => {
      const chosen = boxes.filter((box) => box.checked).map((box) => box.value);
      if (chosen.length === 0) return;
      void this.submitDecision(chosen);
    });
    const reject = el('button', { class: 'reject', 'data-testid': 'reject-all' }, [
      'Reject all',
    ]);
    reject.addEventListener('click', () => void this.submitDecision([]));
    const back = el('button', { 'data-testid': 'back-to-queue' }, ['Back to queue']);
    back.addEventListener('click', () => {
      this.view = 'queue';
      this.current = null;
      this.render();
    });
    section.append(el('div', { class: 'actions' }, [accept, reject, back]));
    return section;
  }

  private renderCandidate(
    item: PairItem,
    candidate: Candidate,
  ): { card: HTMLElement; checkbox: HTMLInputElement } {
    const checkbox = el('input', {
      type: 'checkbox',
      value: candidate.dest_id,
      'data-testid': `choose-${candidate.dest_id}`,
    });
    const scores = el('dl', { class: 'scores' }, [
      el('dt', {}, ['WAT']),
      el('dd', { 'data-testid': `wat-${item.id}-${candidate.dest_id}` }, [
        String(candidate.wat),
      ]),
      el('dt', {}, ['AT']),
      el('dd', { 'data-testid': `at-${item.id}-${candidate.dest_id}` }, [
        String(candidate.at),
      ]),
      el('dt', {}, ['Edit distance']),
      el('dd', {}, [String(candidate.edit_distance)]),
      el('dt', {}, ['Relax level']),
      el('dd', {}, [String(candidate.relax_level)]),
    ]);
    const alignment = el(
      'div',
      { class: 'alignment' },
      candidate.alignment.map((pair) =>
        el('span', { class: `token ${simClass(pair.sim)}`, title: `sim ${pair.sim}` }, [
          `${pair.source_token} ↔ ${pair.dest_token ?? '—'}`,
        ]),
      ),
    );
    const card = el('div', { class: 'candidate', 'data-testid': `candidate-${candidate.dest_id}` }, [
      el('label', {}, [checkbox, ` ${candidate.dest_raw} (${candidate.dest_id})`]),
      scores,
      alignment,
    ]);
    return { card, checkbox };
  }

  private renderMetricsPanel(): void {
    const aside = this.root.querySelector('aside');
    if (!aside) return;
    aside.textContent = '';
    aside.append(el('h2', {}, ['Quality metrics']));
    if (this.metricsStale) {
      aside.append(el('div', { class: 'stale', 'data-testid': 'metrics-stale' }, ['stale data']));
    }
    if (!this.metrics) {
      aside.append(el('p', { 'data-testid': 'metrics-empty' }, ['No metrics yet.']));
      return;
    }
    aside.append(
      el('p', { 'data-testid': 'metrics-progress' }, [
        `${this.metrics.decided} decided / ${this.metrics.unreviewed} unreviewed`,
      ]),
    );
    if (!this.metrics.report) {
      aside.append(
        el('p', { 'data-testid': 'metrics-unreviewed-only' }, [
          'All pairs unreviewed; decide one to see metrics.',
        ]),
      );
      return;
    }
    const list = el('dl', { class: 'metrics' });
    for (const [key, label] of PANEL_METRICS) {
      const value = this.metrics.report.percent[key];
      list.append(
        el('dt', {}, [label]),
        el('dd', { 'data-testid': `metric-${key}` }, [value === null ? '—' : String(value)]),
      );
    }
    aside.append(list);
  }
}
