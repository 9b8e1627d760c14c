// Orchestration between the API client and the store: one mutating request
// in flight at a time, draft preserved on transport errors, history
// refreshed from the server after a double-commit conflict.

import { ApiError, GameClient } from "./api.js";
import { ConsoleStore, HistoryEntry } from "./store.js";
import type { StepOutcome, WhatIfResult } from "./types.js";

export type FlowResult<T> =
    | { ok: true; value: T }
    | { ok: false; reason: "busy" | "offline" | "rejected" | "conflict"; message?: string };

export class ConsoleController {
    constructor(
        private readonly client: GameClient,
        private readonly store: ConsoleStore,
        private sessionId: string | null = null,
    ) {}

    attach(sessionId: string): void {
        this.sessionId = sessionId;
    }

    private requireSession(): string {
        if (!this.sessionId) {
            throw new Error("no session attached");
        }
        return this.sessionId;
    }

    private async mutate<T>(work: () => Promise<T>): Promise<FlowResult<T>> {
        if (this.store.inflight) {
            return { ok: false, reason: "busy" };
        }
        this.store.inflight = true;
        try {
            return { ok: true, value: await work() };
        } catch (error) {
            if (error instanceof ApiError) {
                if (error.status === 409) {
                    await this.refresh();
                    return { ok: false, reason: "conflict", message: error.message };
                }
                return { ok: false, reason: "rejected", message: error.message };
            }
            // Transport failure: keep the draft, surface a banner.
            this.store.banner = "server unreachable; draft preserved";
            return { ok: false, reason: "offline" };
        } finally {
            this.store.inflight = false;
        }
    }

    /** Round-trip the current draft for validation; reconciles the meter. */
    async validateDraft(): Promise<FlowResult<boolean>> {
        const sid = this.requireSession();
        return this.mutate(async () => {
            const result = await this.client.submitPlan(sid, this.store.draftActions());
            this.store.applyValidation(result);
            return result.ok;
        });
    }

    /** Commit flow: post the draft as the plan, then commit the step. */
    async commit(): Promise<FlowResult<StepOutcome>> {
        const sid = this.requireSession();
        return this.mutate(async () => {
            const validation = await this.client.submitPlan(sid, this.store.draftActions());
            this.store.applyValidation(validation);
            if (!validation.ok) {
                throw new ApiError(400, validation.message ?? "plan rejected", validation.violation);
            }
            const outcome = await this.client.commitStep(sid);
            this.store.applyStep(outcome);
            return outcome;
        });
    }

    /** Preview the draft against the server AI without advancing anything. */
    async whatIf(): Promise<FlowResult<WhatIfResult>> {
        const sid = this.requireSession();
        return this.mutate(() => this.client.whatIf(sid, this.store.draftActions(), "ai"));
    }

    async fetchAdvice(): Promise<FlowResult<void>> {
        const sid = this.requireSession();
        return this.mutate(async () => {
            const advice = await this.client.getAdvice(sid);
            this.store.applyAdvice(advice);
        });
    }

    /** Re-sync state and step history from the server's run log. */
    async refresh(): Promise<void> {
        const sid = this.requireSession();
        try {
            const state = await this.client.getState(sid);
            this.store.applyState(state);
            const run = await this.client.getRun(sid);
            let defender = 0;
            let attacker = 0;
            const entries: HistoryEntry[] = run.steps.map((logged, index) => {
                const transfers = logged.transfers.map(([node, from, to, value]) => ({
                    node,
                    from_agent: from,
                    to_agent: to,
                    value,
                }));
                for (const transfer of transfers) {
                    if (transfer.to_agent === 1) {
                        attacker += transfer.value;
                        defender -= transfer.value;
                    } else {
                        defender += transfer.value;
                        attacker -= transfer.value;
                    }
                }
                return {
                    step: index + 1,
                    transfers,
                    scores: { defender, attacker },
                };
            });
            this.store.replaceHistory(entries);
        } catch {
            this.store.banner = "server unreachable; draft preserved";
        }
    }
}
