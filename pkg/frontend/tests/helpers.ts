// Shared fixtures: a small two-node state view and a scripted fetch.

import type { FetchLike } from "../src/api.js";
import type { Role, StateView } from "../src/types.js";

export function makeState(role: Role): StateView {
    const state: StateView = {
        session_id: "abc123",
        role,
        ai_policy: "best-response",
        time_step: 0,
        budgets: { defender: 50, attacker: 300, delta: 1 },
        catalog: {
            hazard: [40, 70, 20],
            patch_cost: [10, 30, 15],
            exploit_cost: [120, 200, 90],
        },
        nodes: [
            { node: 0, value: 5, reachable: 1, owner: "defender", components: [0, 1] },
            { node: 1, value: 3, reachable: 1, owner: "attacker", components: [2] },
        ],
        scores: { defender: 0, attacker: 0 },
        utilities: { defender: 8, attacker: 0 },
        pending: false,
    };
    if (role === "defender") {
        state.phi = { "0": [1, 0, 0] };
    }
    return state;
}

export interface RecordedCall {
    url: string;
    method: string;
    body: unknown;
}

/** A fetch double that replays scripted (status, body) responses in order. */
export function scriptedFetch(
    responses: Array<{ status: number; body: unknown }>,
): { fetchFn: FetchLike; calls: RecordedCall[] } {
    const calls: RecordedCall[] = [];
    const queue = [...responses];
    const fetchFn: FetchLike = async (url, init) => {
        calls.push({
            url,
            method: init?.method ?? "GET",
            body: init?.body ? JSON.parse(init.body as string) : undefined,
        });
        const next = queue.shift();
        if (!next) {
            throw new TypeError("fetch failed");
        }
        return new Response(JSON.stringify(next.body), {
            status: next.status,
            headers: { "Content-Type": "application/json" },
        });
    };
    return { fetchFn, calls };
}
