// DOM rendering. Everything is re-rendered from the session state on
// each change; the queue is small (hundreds of items), so no diffing.

import type { ReviewSession } from "./store.js";
import type { EvidenceSpan, ReviewItem, RubricAnswers } from "./types.js";
import { RUBRIC_REQUIRED } from "./types.js";

const RUBRIC_LABELS: Record<string, string> = {
  evidence_is_results: "Evidence describes experimental results (not background/methods)?",
  participants_consistent: "Both participants consistent with the evidence text?",
  interaction_consistent: "Interaction type consistent with the evidence text?",
  negative_flag_consistent: "Negative-information flag consistent with the evidence text?",
  grounding_correct_a: "Participant A grounding correct? (never changes the verdict)",
  grounding_correct_b: "Participant B grounding correct? (never changes the verdict)",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function participantText(p: any): string {
  if (p === null || p === undefined) return "(blank)";
  if (p.generic) return `${p.generic} (generic)`;
  if (p.entities) return p.entities.map((e: any) => e.entity_text).join(" + ");
  if (p.interaction) return `[${interactionText(p.interaction)}]`;
  return p.entity_text ?? "?";
}

function interactionText(i: any): string {
  return `${participantText(i.participant_a)}  —${i.interaction_type}→  ${participantText(i.participant_b)}`;
}

function evidencePanel(title: string, spans: EvidenceSpan[] | string[]): HTMLElement {
  const body = el("div", { class: "evidence-body" });
  for (const span of spans) {
    const text = typeof span === "string" ? span : span.text;
    const section = typeof span === "string" ? null : span.section;
    body.append(
      el("blockquote", { class: "evidence" }, text, section ? el("span", { class: "tag" }, section) : ""),
    );
  }
  return el("section", { class: "panel" }, el("h3", {}, title), body);
}

function cardPanel(title: string, card: any): HTMLElement {
  return el(
    "section",
    { class: "panel" },
    el("h3", {}, title),
    el("p", { class: "triple" }, interactionText(card.interaction)),
    el(
      "p",
      { class: "meta" },
      `${card.paper_id} · ${card.source_type} · relation: ${card.model_relation?.type ?? "?"}` +
        (card.rank ? ` · rank ${card.rank}` : ""),
    ),
  );
}

function renderItemDetail(item: ReviewItem): HTMLElement {
  const wrap = el("div", { class: "detail" });
  if (item.kind === "CardVerdict") {
    const card = item.payload["card"];
    wrap.append(
      cardPanel("Index card", card),
      evidencePanel("Evidence excerpts", card.evidence ?? []),
    );
  } else if (item.kind === "MatchConfirmation") {
    const card = item.payload["card"];
    const reference = item.payload["reference"];
    wrap.append(
      el(
        "div",
        { class: "side-by-side" },
        el(
          "div",
          {},
          el("section", { class: "panel" },
            el("h3", {}, `Reference ${reference.ref_id} (${reference.category})`),
            el("p", { class: "triple" }, interactionText(reference.interaction))),
        ),
        el("div", {}, cardPanel(`Candidate (${item.payload["match_class"]} match)`, card)),
      ),
      evidencePanel("Candidate evidence", card.evidence ?? []),
    );
    const flags: string[] = item.payload["flags"] ?? [];
    if (flags.length) {
      wrap.append(el("p", { class: "flags" }, `auto-flags: ${flags.join(", ")}`));
    }
  } else {
    wrap.append(
      el(
        "section",
        { class: "panel" },
        el("h3", {}, `Model edge ${item.payload["edge_id"]}`),
        el(
          "p",
          { class: "triple" },
          `${item.payload["source"]}  —${item.payload["kind"]}→  ${item.payload["target"]}`,
        ),
      ),
      evidencePanel("Machine-reading evidence — does any sentence support the edge?",
        item.payload["evidence"] ?? []),
    );
  }
  return wrap;
}

function renderInputs(session: ReviewSession): HTMLElement {
  const state = session.getState();
  const current = state.current!;
  const wrap = el("div", { class: "inputs" });

  if (current.item.kind === "CardVerdict") {
    const fields = [...RUBRIC_REQUIRED, "grounding_correct_a", "grounding_correct_b"] as const;
    fields.forEach((field, index) => {
      const answer = current.answers[field as keyof RubricAnswers];
      const row = el("div", { class: "rubric-row" });
      row.append(el("span", { class: "rubric-label" }, `${index + 1}. ${RUBRIC_LABELS[field]}`));
      for (const value of [true, false]) {
        const button = el(
          "button",
          { class: `choice ${answer === value ? "selected" : ""}`, "data-field": field },
          value ? "yes" : "no",
        );
        button.onclick = () => session.answerRubric(field as keyof RubricAnswers, value);
        row.append(button);
      }
      wrap.append(row);
    });
  } else if (current.item.kind === "MatchConfirmation") {
    for (const choice of ["accept", "reject"] as const) {
      const button = el(
        "button",
        { class: `choice big ${current.matchChoice === choice ? "selected" : ""}` },
        choice === "accept" ? "Accept match (a)" : "Reject match (r)",
      );
      button.onclick = () => session.chooseMatch(choice);
      wrap.append(button);
    }
  } else {
    for (const choice of ["supported", "unsupported"] as const) {
      const button = el(
        "button",
        { class: `choice big ${current.evidenceChoice === choice ? "selected" : ""}` },
        choice === "supported" ? "Evidence supports (a)" : "Not supported (r)",
      );
      button.onclick = () => session.chooseEvidence(choice);
      wrap.append(button);
    }
  }

  const submit = el("button", { class: "submit", id: "submit" }, "Submit (enter)");
  submit.toggleAttribute("disabled", !session.canSubmit());
  submit.onclick = () => void session.submit();
  wrap.append(submit);
  return wrap;
}

function renderReportWidget(report: any): HTMLElement {
  const widget = el("section", { class: "panel report" }, el("h3", {}, "Live report"));
  if (!report) {
    widget.append(el("p", {}, "no report yet"));
    return widget;
  }
  for (const [team, doc] of Object.entries<any>(report.teams ?? {})) {
    const lines: string[] = [];
    if (doc.precision) lines.push(`precision ${Number(doc.precision.value).toFixed(2)}`);
    for (const [bucket, o] of Object.entries<any>(doc.overlap_by_category ?? {})) {
      lines.push(`${bucket}: ${o.matches}/${o.reference_total} (${o.percent}%)`);
    }
    if (doc.attempted !== undefined) lines.push(`attempted ${doc.attempted}`);
    widget.append(el("p", {}, el("strong", {}, team), " — ", lines.join(" · ") || "no metrics yet"));
  }
  return widget;
}

export function render(root: HTMLElement, session: ReviewSession): void {
  const state = session.getState();
  root.replaceChildren();

  const counters = state.counters;
  root.append(
    el(
      "header",
      { class: "topbar" },
      el("h1", {}, "mecheval review"),
      el(
        "div",
        { class: "progress" },
        `run ${state.runId} · ${state.status} · queued ${counters.Queued} · claimed ${counters.Claimed} · resolved ${counters.Resolved} / ${counters.total}`,
      ),
    ),
  );

  if (state.error) {
    root.append(el("div", { class: "banner error" }, `request failed: ${state.error} — your claim and answers are kept`));
  }
  if (state.conflict) {
    const banner = el(
      "div",
      { class: "banner conflict" },
      `${state.conflict.kind === "stale_revision" ? "Someone judged this card after you loaded it" : state.conflict.kind === "already_claimed" ? "Item already claimed or resolved" : "Your claim expired"}: ${state.conflict.message} `,
    );
    const reload = el("button", { class: "choice" }, "Reload queue");
    reload.onclick = () => void session.reloadAfterConflict();
    banner.append(reload);
    root.append(banner);
  }

  const main = el("main", { class: "columns" });
  const queueColumn = el("aside", { class: "queue" }, el("h2", {}, "Queue (j/k, c to claim)"));
  for (const item of state.items) {
    const row = el(
      "div",
      {
        class: `item ${item.state.toLowerCase()} ${state.current?.item.item_id === item.item_id ? "active" : ""}`,
      },
      el("span", { class: "kind" }, item.kind),
      el("span", { class: "id" }, item.item_id),
      el("span", { class: `state ${item.state.toLowerCase()}` }, item.state),
    );
    if (item.state === "Queued") {
      row.onclick = () => void session.claim(item.item_id);
    }
    queueColumn.append(row);
  }

  const work = el("section", { class: "work" });
  if (state.current) {
    work.append(renderItemDetail(state.current.item), renderInputs(session));
  } else {
    const claim = el("button", { class: "submit" }, "Claim next item (c)");
    claim.onclick = () => void session.claimNext();
    work.append(el("p", {}, "No item claimed."), claim);
  }
  work.append(renderReportWidget(state.report));

  main.append(queueColumn, work);
  root.append(main);
}
