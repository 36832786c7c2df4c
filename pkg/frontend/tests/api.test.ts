import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, debounce } from "../src/api.js";
import { emptyDraft } from "../src/state.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("api client", () => {
  it("latest-wins: a superseded evaluate resolves to null", async () => {
    const gates: Array<() => void> = [];
    const client = new ApiClient("", (input) => {
      void input;
      return new Promise((resolve) => {
        gates.push(() => resolve(jsonResponse({ schema: 1, outcomes: {},
                                                seq: gates.length })));
      });
    });
    const first = client.evaluate(emptyDraft("one"));
    const second = client.evaluate(emptyDraft("two"));
    // respond to the stale request first, then the fresh one
    gates[0]();
    gates[1]();
    expect(await first).toBeNull();
    expect(await second).not.toBeNull();
  });

  it("maps error bodies onto ApiError", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse({ schema: 1, error: "BAD_SCENARIO", message: "nope" }, 400));
    await expect(client.evaluate(emptyDraft())).rejects.toMatchObject({
      status: 400,
      code: "BAD_SCENARIO",
    });
    try {
      await client.evaluate(emptyDraft());
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
    }
  });

  it("debounce collapses bursts to the trailing call", async () => {
    let calls = 0;
    const bump = debounce(() => { calls += 1; }, 10);
    bump();
    bump();
    bump();
    await new Promise((resolve) => setTimeout(resolve, 40));
    expect(calls).toBe(1);
  });
});
