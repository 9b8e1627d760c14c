import { describe, expect, it } from "vitest";

import { ApiError, GameClient } from "../src/api.js";
import { scriptedFetch } from "./helpers.js";

describe("GameClient", () => {
    it("posts session creation with role and policy", async () => {
        const { fetchFn, calls } = scriptedFetch([
            { status: 201, body: { session_id: "s1", role: "defender", ai_policy: "best-response" } },
        ]);
        const client = new GameClient("http://game", fetchFn);
        const session = await client.createSession("defender", "best-response", 7);
        expect(session.session_id).toBe("s1");
        expect(calls[0]).toMatchObject({
            url: "http://game/sessions",
            method: "POST",
            body: { role: "defender", ai_policy: "best-response", seed: 7 },
        });
    });

    it("wraps plan and step endpoints", async () => {
        const { fetchFn, calls } = scriptedFetch([
            { status: 200, body: { ok: true, cost: 10, remaining: 40 } },
            { status: 200, body: { step: 1, transfers: [], scores: { defender: 0, attacker: 0 } } },
        ]);
        const client = new GameClient("http://game", fetchFn);
        const result = await client.submitPlan("s1", { patches: [[0, 0]] });
        expect(result.ok).toBe(true);
        await client.commitStep("s1");
        expect(calls.map((c) => c.url)).toEqual([
            "http://game/sessions/s1/plan",
            "http://game/sessions/s1/step",
        ]);
        expect(calls[0]!.body).toEqual({ actions: { patches: [[0, 0]] } });
    });

    it("raises ApiError with status and violation on non-2xx", async () => {
        const { fetchFn } = scriptedFetch([
            { status: 409, body: { code: 409, message: "no pending plan" } },
        ]);
        const client = new GameClient("http://game", fetchFn);
        await expect(client.commitStep("s1")).rejects.toThrowError(ApiError);
        const { fetchFn: fetch2 } = scriptedFetch([
            { status: 409, body: { code: 409, message: "no pending plan" } },
        ]);
        try {
            await new GameClient("http://game", fetch2).commitStep("s1");
        } catch (error) {
            expect((error as ApiError).status).toBe(409);
            expect((error as ApiError).message).toBe("no pending plan");
        }
    });

    it("sends whatif with an ai opponent by default", async () => {
        const { fetchFn, calls } = scriptedFetch([
            { status: 200, body: { ok: true, non_binding: true, transfers: [] } },
        ]);
        const client = new GameClient("http://game", fetchFn);
        await client.whatIf("s1", { patches: [] });
        expect(calls[0]!.body).toEqual({ plan: { patches: [] }, opponent: "ai" });
    });
});
