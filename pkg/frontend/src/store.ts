// View-model for the operations console.
//
// The console is a pure client: every displayed number comes from the
// server.  The one provisional figure is the budget meter, estimated
// locally per toggle from the shared catalog costs and reconciled against
// the server's cost on every validation round-trip.

import type {
    Advice,
    PlanActions,
    PlanResult,
    Role,
    StateView,
    StepOutcome,
    TransferView,
} from "./types.js";

export interface HistoryEntry {
    step: number;
    transfers: TransferView[];
    scores: { defender: number; attacker: number };
}

export type CellKey = `${number}:${number}`;

export function cellKey(vuln: number, node: number): CellKey {
    return `${vuln}:${node}`;
}

export class ConsoleStore {
    state: StateView | null = null;
    draft = new Set<CellKey>();
    history: HistoryEntry[] = [];
    adviceCells = new Set<CellKey>();
    lastValidation: PlanResult | null = null;
    banner: string | null = null;
    inflight = false;

    constructor(public readonly role: Role) {}

    applyState(state: StateView): void {
        this.state = state;
        this.banner = null;
    }

    // -- plan drafting --

    /** Can this role act on the cell at all? */
    canAct(vuln: number, node: number): boolean {
        if (!this.state) {
            return false;
        }
        const view = this.state.nodes[node];
        if (!view || !view.components.includes(vuln)) {
            return false;
        }
        if (this.role === "defender") {
            return view.owner === "defender";
        }
        return view.reachable === 1 && view.owner === "defender";
    }

    /** Toggle a cell in the draft; returns false when the role may not act on it. */
    toggle(vuln: number, node: number): boolean {
        if (!this.canAct(vuln, node)) {
            return false;
        }
        const key = cellKey(vuln, node);
        if (this.draft.has(key)) {
            this.draft.delete(key);
        } else {
            this.draft.add(key);
        }
        this.lastValidation = null; // stale until the next round-trip
        return true;
    }

    draftActions(): PlanActions {
        const cells = [...this.draft]
            .map((key) => key.split(":").map(Number))
            .sort((a, b) => a[0]! - b[0]! || a[1]! - b[1]!);
        return this.role === "defender" ? { patches: cells } : { exploits: cells };
    }

    /** Provisional spend, from the shared per-action costs. */
    localCost(): number {
        if (!this.state) {
            return 0;
        }
        const costs =
            this.role === "defender"
                ? this.state.catalog.patch_cost
                : this.state.catalog.exploit_cost;
        let total = 0;
        for (const key of this.draft) {
            const vuln = Number(key.split(":")[0]);
            total += costs[vuln] ?? 0;
        }
        return total;
    }

    /** Budget meter: the server's cost once validated, the local estimate before. */
    budgetMeter(): number {
        return this.lastValidation ? this.lastValidation.cost : this.localCost();
    }

    budgetCap(): number {
        if (!this.state) {
            return 0;
        }
        return this.state.budgets[this.role];
    }

    applyValidation(result: PlanResult): void {
        this.lastValidation = result;
    }

    commitEnabled(): boolean {
        return (
            !this.inflight &&
            this.lastValidation !== null &&
            this.lastValidation.ok === true
        );
    }

    // -- step history and scoreboard --

    applyStep(outcome: StepOutcome): void {
        this.history.push({
            step: outcome.step,
            transfers: outcome.transfers,
            scores: outcome.scores,
        });
        this.applyState(outcome.state);
        this.draft.clear();
        this.lastValidation = null;
        this.adviceCells.clear();
    }

    replaceHistory(entries: HistoryEntry[]): void {
        this.history = entries;
    }

    /** Cumulative score deltas must cancel at every rendered step. */
    scoreboardConsistent(epsilon = 1e-9): boolean {
        return this.history.every(
            (entry) => Math.abs(entry.scores.defender + entry.scores.attacker) <= epsilon,
        );
    }

    // -- advice overlay --

    applyAdvice(advice: Advice): void {
        const cells = advice.plan.patches ?? advice.plan.exploits ?? [];
        this.adviceCells = new Set(cells.map(([vuln, node]) => cellKey(vuln!, node!)));
    }

    // -- rendering hints --

    /**
     * Patch-status glyph for a cell, or null when the viewer may not see it.
     * Attacker views have no exploitability data, so they never get a glyph.
     */
    glyphFor(vuln: number, node: number): "open" | "covered" | null {
        const bits = this.state?.phi?.[String(node)];
        if (!bits) {
            return null;
        }
        return bits[vuln] === 1 ? "open" : "covered";
    }
}
