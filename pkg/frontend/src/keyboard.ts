// Keyboard-first review flow: reviewers work hundreds of items, so every
// action has a key. Number keys toggle rubric answers (shift = no),
// a / r accept or reject, enter submits, c claims the next item.

import type { ReviewSession } from "./store.js";
import { RUBRIC_REQUIRED } from "./types.js";

export function bindKeyboard(session: ReviewSession, target: GlobalEventHandlers): void {
  target.onkeydown = (event: KeyboardEvent) => {
    const state = session.getState();
    const current = state.current;
    switch (event.key) {
      case "c":
        if (!current) void session.claimNext();
        break;
      case "a":
        if (current?.item.kind === "MatchConfirmation") session.chooseMatch("accept");
        if (current?.item.kind === "EvidenceSupport") session.chooseEvidence("supported");
        break;
      case "r":
        if (current?.item.kind === "MatchConfirmation") session.chooseMatch("reject");
        if (current?.item.kind === "EvidenceSupport") session.chooseEvidence("unsupported");
        break;
      case "Enter":
        if (session.canSubmit()) void session.submit();
        break;
      case "1":
      case "2":
      case "3":
      case "4": {
        if (current?.item.kind !== "CardVerdict") break;
        const field = RUBRIC_REQUIRED[Number(event.key) - 1];
        if (field) session.answerRubric(field, !event.shiftKey);
        break;
      }
      case "!":
      case "@":
      case "#":
      case "$": {
        if (current?.item.kind !== "CardVerdict") break;
        const index = "!@#$".indexOf(event.key);
        const field = RUBRIC_REQUIRED[index];
        if (field) session.answerRubric(field, false);
        break;
      }
      default:
        return;
    }
  };
}
