// Review-session state machine.
//
// The store enforces the UI-side contract: a decision can only be
// submitted once every rubric input is answered, the posted payload
// carries raw assessments only (all verdict logic lives server-side),
// and any conflict (item claimed elsewhere, stale judgment revision,
// expired claim) surfaces as an explicit prompt instead of a silent
// overwrite. A failed post keeps the item claimed and the answers
// intact, so nothing a reviewer entered is ever lost.

import { ApiClient, ApiError } from "./api.js";
import {
  RUBRIC_REQUIRED,
  type ConflictKind,
  type Decision,
  type QueueCounters,
  type QueueFilter,
  type ReportDoc,
  type ReviewItem,
  type RubricAnswers,
} from "./types.js";

export type MatchChoice = "accept" | "reject";
export type EvidenceChoice = "supported" | "unsupported";

export interface CurrentItem {
  item: ReviewItem;
  answers: RubricAnswers;
  matchChoice?: MatchChoice;
  evidenceChoice?: EvidenceChoice;
}

export interface Conflict {
  kind: ConflictKind;
  message: string;
  itemId: string;
}

export interface SessionState {
  runId: string;
  status: string;
  counters: QueueCounters;
  items: ReviewItem[];
  filter: QueueFilter;
  current: CurrentItem | null;
  conflict: Conflict | null;
  error: string | null;
  report: ReportDoc | null;
  busy: boolean;
}

type Listener = (state: SessionState) => void;

export class ReviewSession {
  private state: SessionState;
  private listeners: Listener[] = [];

  constructor(private api: ApiClient, runId: string) {
    this.state = {
      runId,
      status: "",
      counters: { Queued: 0, Claimed: 0, Resolved: 0, total: 0 },
      items: [],
      filter: {},
      current: null,
      conflict: null,
      error: null,
      report: null,
      busy: false,
    };
  }

  getState(): SessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async loadQueue(filter?: QueueFilter): Promise<void> {
    if (filter) this.state.filter = filter;
    this.update({ busy: true, error: null });
    try {
      const queue = await this.api.queue(this.state.runId, this.state.filter);
      this.update({
        items: queue.items,
        counters: queue.counters,
        status: queue.status,
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  queuedItems(): ReviewItem[] {
    return this.state.items.filter((i) => i.state === "Queued");
  }

  /** Claim a specific item; a conflict is surfaced, not fatal. */
  async claim(itemId: string): Promise<boolean> {
    this.update({ busy: true, conflict: null, error: null });
    try {
      const { item } = await this.api.claim(itemId);
      this.update({
        busy: false,
        current: { item, answers: {} },
        items: this.state.items.map((i) => (i.item_id === item.item_id ? item : i)),
      });
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.conflict) {
        this.update({
          busy: false,
          conflict: { kind: err.conflict, message: err.detail, itemId },
        });
        return false;
      }
      this.update({ busy: false, error: describe(err) });
      return false;
    }
  }

  /** Claim the next queued item, skipping ones other reviewers grab first. */
  async claimNext(): Promise<boolean> {
    for (const item of this.queuedItems()) {
      if (await this.claim(item.item_id)) return true;
      if (this.state.error) return false; // network trouble: stop, do not spin
    }
    return false;
  }

  answerRubric<K extends keyof RubricAnswers>(field: K, value: boolean): void {
    if (!this.state.current) return;
    this.update({
      current: {
        ...this.state.current,
        answers: { ...this.state.current.answers, [field]: value },
      },
    });
  }

  chooseMatch(choice: MatchChoice): void {
    if (!this.state.current) return;
    this.update({ current: { ...this.state.current, matchChoice: choice } });
  }

  chooseEvidence(choice: EvidenceChoice): void {
    if (!this.state.current) return;
    this.update({ current: { ...this.state.current, evidenceChoice: choice } });
  }

  /** Submission stays disabled until every required input is answered. */
  canSubmit(): boolean {
    const current = this.state.current;
    if (!current || this.state.busy) return false;
    switch (current.item.kind) {
      case "CardVerdict":
        return RUBRIC_REQUIRED.every((f) => typeof current.answers[f] === "boolean");
      case "MatchConfirmation":
        return current.matchChoice !== undefined;
      case "EvidenceSupport":
        return current.evidenceChoice !== undefined;
    }
  }

  /**
   * The outgoing payload: raw assessments plus the judgment revision the
   * reviewer is writing. Never a verdict; the server computes those.
   */
  buildDecision(): Decision {
    const current = this.state.current;
    if (!current || !this.canSubmit()) {
      throw new Error("decision is incomplete");
    }
    const revision = nextRevision(current.item);
    switch (current.item.kind) {
      case "CardVerdict": {
        const decision: Decision = { revision };
        for (const [field, value] of Object.entries(current.answers)) {
          if (typeof value === "boolean") decision[field] = value;
        }
        return decision;
      }
      case "MatchConfirmation":
        return { accept: current.matchChoice === "accept", revision };
      case "EvidenceSupport":
        return { supported: current.evidenceChoice === "supported", revision };
    }
  }

  async submit(): Promise<boolean> {
    const current = this.state.current;
    if (!current || !this.canSubmit()) return false;
    const decision = this.buildDecision();
    this.update({ busy: true, error: null, conflict: null });
    try {
      const { item } = await this.api.resolve(current.item.item_id, decision);
      this.update({
        busy: false,
        current: null,
        items: this.state.items.map((i) => (i.item_id === item.item_id ? item : i)),
        counters: recount(this.state.counters, current.item.state, item.state),
      });
      await this.refreshReport();
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.conflict) {
        // Stale revision / lost claim: prompt for a reload. The item stays
        // claimed locally and the answers stay put; nothing is overwritten.
        this.update({
          busy: false,
          conflict: { kind: err.conflict, message: err.detail, itemId: current.item.item_id },
        });
        return false;
      }
      // Network failure: keep the claim and the entered answers.
      this.update({ busy: false, error: describe(err) });
      return false;
    }
  }

  /** Reload path offered by the conflict prompt. */
  async reloadAfterConflict(): Promise<void> {
    this.update({ conflict: null, current: null });
    await this.loadQueue();
    await this.refreshReport();
  }

  async refreshReport(): Promise<void> {
    try {
      const report = await this.api.report(this.state.runId);
      this.update({ report });
    } catch (err) {
      this.update({ error: describe(err) });
    }
  }
}

function nextRevision(item: ReviewItem): number {
  // The server reports the judgment revision current when the item was
  // fetched; writing base+1 makes a lost race loudly 409 instead of
  // silently overwriting someone else's judgment.
  return Number(item.judgment_revision ?? 0) + 1;
}

function recount(counters: QueueCounters, from: string, to: string): QueueCounters {
  const next = { ...counters };
  if (from === "Queued") next.Queued -= 1;
  if (from === "Claimed") next.Claimed -= 1;
  if (to === "Resolved") next.Resolved += 1;
  return next;
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
