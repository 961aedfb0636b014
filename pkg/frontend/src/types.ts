// Payload shapes of the review service JSON API. These mirror the server's
// queue items and metrics exactly; the client never recomputes any of them.

export interface TokenAlignment {
  source_token: string;
  dest_token: string | null;
  sim: number;
}

export interface Candidate {
  dest_id: string;
  dest_raw: string;
  dest_tokens: string[];
  wat: number;
  at: number;
  edit_distance: number;
  relax_level: number;
  alignment: TokenAlignment[];
}

export type PairStatus = 'pending' | 'accepted' | 'rejected';

export interface PairItem {
  id: string;
  source_id: string;
  source_raw: string;
  source_tokens: string[];
  candidates: Candidate[];
  status: PairStatus;
  accepted: string[];
  decided_by: string | null;
  decided_at: string | null;
}

export interface PairsPage {
  items: PairItem[];
  total: number;
  page: number;
  page_size: number;
}

export interface MetricsReportJson {
  total: number;
  proportions: Record<string, number | null>;
  percent: Record<string, number | null>;
  notes: string[];
}

export interface MetricsPayload {
  decided: number;
  unreviewed: number;
  pending_by_multiplicity: Record<string, number>;
  report: MetricsReportJson | null;
  matrix: unknown;
}

export type DecisionBody = { accept: string[] } | { reject: true };
