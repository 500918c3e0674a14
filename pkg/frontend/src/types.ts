// Payload types mirroring the review API contract (/api/v1).

export type ItemKind = "CardVerdict" | "MatchConfirmation" | "EvidenceSupport";
export type ItemState = "Queued" | "Claimed" | "Resolved";

export interface EvidenceSpan {
  text: string;
  section?: string | null;
  figure_ref?: string | null;
}

export interface ReviewItem {
  item_id: string;
  kind: ItemKind;
  payload: Record<string, any>;
  state: ItemState;
  claimed_by: string | null;
  claimed_at: number | null;
  resolution: Record<string, any> | null;
  /** Current revision of the judgment this item writes (server-supplied). */
  judgment_revision?: number;
}

export interface QueueCounters {
  Queued: number;
  Claimed: number;
  Resolved: number;
  total: number;
}

export interface QueueResponse {
  run_id: string;
  status: string;
  counters: QueueCounters;
  items: ReviewItem[];
}

// Raw reviewer answers; the server owns all verdict logic. The UI must
// never send a computed verdict.
export interface RubricAnswers {
  evidence_is_results?: boolean;
  participants_consistent?: boolean;
  interaction_consistent?: boolean;
  negative_flag_consistent?: boolean;
  grounding_correct_a?: boolean;
  grounding_correct_b?: boolean;
}

export const RUBRIC_REQUIRED: (keyof RubricAnswers)[] = [
  "evidence_is_results",
  "participants_consistent",
  "interaction_consistent",
  "negative_flag_consistent",
];

export type Decision = Record<string, boolean | number>;

export interface QueueFilter {
  kind?: ItemKind;
  state?: ItemState;
  paper?: string;
}

export type ConflictKind = "already_claimed" | "stale_revision" | "not_claimant";

export interface ReportDoc {
  run_id: string;
  status: string;
  teams: Record<string, any>;
  queue: QueueCounters;
  [key: string]: any;
}
