import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReviewSession } from "../src/store.js";
import { RUBRIC_REQUIRED } from "../src/types.js";
import { FakeReviewServer, cardVerdictPayload, seededServer } from "./fake_server.js";

function makeSession(server: FakeReviewServer = seededServer(), token = "tok-mp") {
  const api = new ApiClient("http://fake", token, server.fetch);
  return { server, session: new ReviewSession(api, "r1") };
}

async function claimKind(session: ReviewSession, kind: string): Promise<void> {
  await session.loadQueue();
  const item = session.getState().items.find((i) => i.kind === kind && i.state === "Queued")!;
  expect(await session.claim(item.item_id)).toBe(true);
}

describe("rubric gating", () => {
  it("submit stays disabled until every rubric input is answered", async () => {
    const { session } = makeSession();
    await claimKind(session, "CardVerdict");
    expect(session.canSubmit()).toBe(false);
    for (const field of RUBRIC_REQUIRED.slice(0, 3)) {
      session.answerRubric(field, true);
      expect(session.canSubmit()).toBe(false);
    }
    session.answerRubric("negative_flag_consistent", true);
    expect(session.canSubmit()).toBe(true);
  });

  it("match confirmations need an explicit accept/reject", async () => {
    const { session } = makeSession();
    await claimKind(session, "MatchConfirmation");
    expect(session.canSubmit()).toBe(false);
    session.chooseMatch("accept");
    expect(session.canSubmit()).toBe(true);
  });

  it("optional grounding answers do not unlock submission", async () => {
    const { session } = makeSession();
    await claimKind(session, "CardVerdict");
    session.answerRubric("grounding_correct_a", false);
    session.answerRubric("grounding_correct_b", true);
    expect(session.canSubmit()).toBe(false);
  });
});

describe("decision payloads", () => {
  it("contain only raw assessments and a revision, never a verdict", async () => {
    const { session } = makeSession();
    await claimKind(session, "CardVerdict");
    for (const field of RUBRIC_REQUIRED) session.answerRubric(field, true);
    session.answerRubric("grounding_correct_b", false);
    const decision = session.buildDecision();
    expect(decision).toEqual({
      revision: 1,
      evidence_is_results: true,
      participants_consistent: true,
      interaction_consistent: true,
      negative_flag_consistent: true,
      grounding_correct_b: false,
    });
    const keys = Object.keys(decision).join(" ");
    expect(keys).not.toMatch(/verdict|skip|largely|incorrect/i);
  });

  it("uses the server-reported judgment revision as the base", async () => {
    const server = seededServer();
    server.judgments.set("team-a/PMC0000001/c000", [
      { revision: 1, verdict: "Incorrect", decision: {} },
      { revision: 2, verdict: "LargelyCorrect", decision: {} },
    ]);
    const { session } = makeSession(server);
    await claimKind(session, "MatchConfirmation");
    session.chooseMatch("accept");
    expect(session.buildDecision()).toEqual({ accept: true, revision: 3 });
  });
});

describe("failure handling", () => {
  it("a network failure keeps the item claimed and the answers intact", async () => {
    const server = seededServer();
    let offline = false;
    const flaky: typeof server.fetch = async (url, init) => {
      if (offline && String(url).includes("/resolve")) throw new Error("network down");
      return server.fetch(url, init);
    };
    const api = new ApiClient("http://fake", "tok-mp", flaky);
    const session = new ReviewSession(api, "r1");
    await claimKind(session, "CardVerdict");
    for (const field of RUBRIC_REQUIRED) session.answerRubric(field, true);

    offline = true;
    expect(await session.submit()).toBe(false);
    const state = session.getState();
    expect(state.error).toContain("network down");
    expect(state.current?.item.kind).toBe("CardVerdict");
    expect(state.current?.answers.evidence_is_results).toBe(true);
    // the server still shows the claim held by this reviewer
    const serverItem = [...server.items.values()].find((i) => i.kind === "CardVerdict")!;
    expect(serverItem.state).toBe("Claimed");
    expect(serverItem.claimed_by).toBe("mp");

    offline = false;
    expect(await session.submit()).toBe(true);
    expect(session.getState().current).toBeNull();
  });

  it("claimNext skips items other reviewers grabbed first", async () => {
    const server = seededServer();
    const rival = new ApiClient("http://fake", "tok-tk", server.fetch);
    const first = [...server.items.keys()][0]!;
    await rival.claim(first);

    const { session } = makeSession(server);
    await session.loadQueue();
    expect(await session.claimNext()).toBe(true);
    expect(session.getState().current?.item.item_id).not.toBe(first);
  });

  it("an expired claim surfaces as a retry prompt, not a lost decision", async () => {
    const server = seededServer();
    const { session } = makeSession(server);
    await claimKind(session, "MatchConfirmation");
    session.chooseMatch("accept");
    // the server expired the claim while the reviewer was reading
    const item = [...server.items.values()].find((i) => i.kind === "MatchConfirmation")!;
    item.state = "Queued";
    item.claimed_by = null;

    expect(await session.submit()).toBe(false);
    expect(session.getState().conflict?.kind).toBe("not_claimant");
    expect(session.getState().current?.matchChoice).toBe("accept");
  });
});

describe("report widget", () => {
  it("refreshes after a successful resolution", async () => {
    const { session } = makeSession();
    await session.refreshReport();
    expect(
      session.getState().report?.teams["team-a"].overlap_by_category.direct_phospho_bind.matches,
    ).toBe(0);
    await claimKind(session, "MatchConfirmation");
    session.chooseMatch("accept");
    expect(await session.submit()).toBe(true);
    expect(
      session.getState().report?.teams["team-a"].overlap_by_category.direct_phospho_bind.matches,
    ).toBe(1);
  });
});
