import { describe, expect, it } from "vitest";

import { cellKey, ConsoleStore } from "../src/store.js";
import type { StepOutcome } from "../src/types.js";
import { makeState } from "./helpers.js";

function defenderStore(): ConsoleStore {
    const store = new ConsoleStore("defender");
    store.applyState(makeState("defender"));
    return store;
}

describe("plan drafting", () => {
    it("toggle then untoggle restores the previous draft", () => {
        const store = defenderStore();
        expect(store.toggle(0, 0)).toBe(true);
        expect(store.draft.has(cellKey(0, 0))).toBe(true);
        expect(store.toggle(0, 0)).toBe(true);
        expect(store.draft.size).toBe(0);
    });

    it("never admits cells the role may not act on", () => {
        const defender = defenderStore();
        expect(defender.toggle(2, 1)).toBe(false); // enemy-owned node
        expect(defender.toggle(1, 1)).toBe(false); // component not present there
        expect(defender.draft.size).toBe(0);

        const attacker = new ConsoleStore("attacker");
        attacker.applyState(makeState("attacker"));
        expect(attacker.toggle(0, 0)).toBe(true); // reachable defender node
        expect(attacker.toggle(2, 1)).toBe(false); // already attacker-owned
    });

    it("splits the draft into the role's action kind", () => {
        const defender = defenderStore();
        defender.toggle(0, 0);
        expect(defender.draftActions()).toEqual({ patches: [[0, 0]] });

        const attacker = new ConsoleStore("attacker");
        attacker.applyState(makeState("attacker"));
        attacker.toggle(1, 0);
        attacker.toggle(0, 0);
        expect(attacker.draftActions()).toEqual({ exploits: [[0, 0], [1, 0]] });
    });
});

describe("budget meter", () => {
    it("estimates locally from catalog costs before any validation", () => {
        const store = defenderStore();
        store.toggle(0, 0);
        store.toggle(1, 0);
        expect(store.budgetMeter()).toBe(10 + 30);
        expect(store.budgetCap()).toBe(50);
    });

    it("equals the server-computed cost after every validation round-trip", () => {
        const store = defenderStore();
        store.toggle(0, 0);
        store.applyValidation({ ok: true, cost: 12.5, remaining: 37.5 });
        expect(store.budgetMeter()).toBe(12.5);
        // a new toggle invalidates the reconciled figure
        store.toggle(1, 0);
        expect(store.lastValidation).toBeNull();
        expect(store.budgetMeter()).toBe(40);
    });

    it("enables commit only on a validated, accepted draft", () => {
        const store = defenderStore();
        expect(store.commitEnabled()).toBe(false);
        store.applyValidation({ ok: false, cost: 90, remaining: -40, violation: "budget" });
        expect(store.commitEnabled()).toBe(false);
        store.applyValidation({ ok: true, cost: 10, remaining: 40 });
        expect(store.commitEnabled()).toBe(true);
        store.inflight = true;
        expect(store.commitEnabled()).toBe(false);
    });
});

describe("history and scoreboard", () => {
    const outcome = (step: number, defender: number): StepOutcome => ({
        step,
        transfers: [],
        scores: { defender, attacker: -defender },
        utilities: { defender: 0, attacker: 0 },
        state: makeState("defender"),
    });

    it("stays zero-sum across rendered steps", () => {
        const store = defenderStore();
        store.applyStep(outcome(1, -5));
        store.applyStep(outcome(2, -8));
        expect(store.history).toHaveLength(2);
        expect(store.scoreboardConsistent()).toBe(true);
        store.history[1]!.scores.attacker = 9; // corrupt it
        expect(store.scoreboardConsistent()).toBe(false);
    });

    it("clears the draft and validation on a committed step", () => {
        const store = defenderStore();
        store.toggle(0, 0);
        store.applyValidation({ ok: true, cost: 10, remaining: 40 });
        store.applyStep(outcome(1, 0));
        expect(store.draft.size).toBe(0);
        expect(store.lastValidation).toBeNull();
    });
});

describe("advice overlay and glyphs", () => {
    it("highlights exactly the server's recommended cells", () => {
        const store = defenderStore();
        store.applyAdvice({
            plan: { patches: [[0, 0], [1, 0]] },
            rationale: [],
            belief_source: "default",
        });
        expect(store.adviceCells).toEqual(new Set([cellKey(0, 0), cellKey(1, 0)]));
    });

    it("renders patch-status glyphs for the defender only", () => {
        const defender = defenderStore();
        expect(defender.glyphFor(0, 0)).toBe("open");
        expect(defender.glyphFor(1, 0)).toBe("covered");

        const attacker = new ConsoleStore("attacker");
        attacker.applyState(makeState("attacker"));
        expect(attacker.glyphFor(0, 0)).toBeNull();
        expect(attacker.glyphFor(1, 0)).toBeNull();
    });
});
