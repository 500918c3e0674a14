import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { seededServer } from "./fake_server.js";

function client(token = "tok-mp") {
  const server = seededServer();
  return { server, api: new ApiClient("http://fake", token, server.fetch) };
}

describe("ApiClient", () => {
  it("rejects bad tokens with a 401 ApiError", async () => {
    const { api } = client("tok-nobody");
    await expect(api.queue("r1")).rejects.toMatchObject({ status: 401 });
  });

  it("fetches the queue with counters and revision-enriched items", async () => {
    const { api } = client();
    const queue = await api.queue("r1");
    expect(queue.counters.total).toBe(3);
    expect(queue.items).toHaveLength(3);
    expect(queue.items[0]!.judgment_revision).toBe(0);
  });

  it("passes filters through as query parameters", async () => {
    const { api } = client();
    const queue = await api.queue("r1", { kind: "MatchConfirmation" });
    expect(queue.items).toHaveLength(1);
    expect(queue.items[0]!.kind).toBe("MatchConfirmation");
  });

  it("claims an item and reports a conflict as already_claimed", async () => {
    const { server, api } = client();
    const other = new ApiClient("http://fake", "tok-tk", server.fetch);
    const itemId = (await api.queue("r1")).items[0]!.item_id;
    await api.claim(itemId);
    try {
      await other.claim(itemId);
      expect.unreachable("second claim must conflict");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(409);
      expect((err as ApiError).conflict).toBe("already_claimed");
    }
  });

  it("classifies stale revisions distinctly from claim conflicts", async () => {
    const { api } = client();
    const queue = await api.queue("r1", { kind: "MatchConfirmation" });
    const itemId = queue.items[0]!.item_id;
    await api.claim(itemId);
    try {
      await api.resolve(itemId, { accept: true, revision: 7 });
      expect.unreachable("revision 7 cannot follow revision 0");
    } catch (err) {
      expect((err as ApiError).conflict).toBe("stale_revision");
    }
  });

  it("maps resolve-without-claim to not_claimant", async () => {
    const { api } = client();
    const itemId = (await api.queue("r1")).items[0]!.item_id;
    try {
      await api.resolve(itemId, { accept: true });
      expect.unreachable("resolve requires a claim");
    } catch (err) {
      expect((err as ApiError).status).toBe(403);
      expect((err as ApiError).conflict).toBe("not_claimant");
    }
  });
});
