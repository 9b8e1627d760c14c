// Thin typed client over the game server's HTTP API.  The fetch function is
// injectable so tests can run against a scripted transport.

import type {
    Advice,
    CreateSessionResponse,
    PlanActions,
    PlanResult,
    Role,
    RunDoc,
    StateView,
    StepOutcome,
    WhatIfResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        message: string,
        public readonly violation?: string,
    ) {
        super(message);
    }
}

export class GameClient {
    constructor(
        private readonly baseUrl: string,
        private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
    ) {}

    private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchFn(this.baseUrl + path, init);
        const text = await response.text();
        const doc = text ? JSON.parse(text) : {};
        if (!response.ok) {
            throw new ApiError(response.status, doc.message ?? response.statusText, doc.violation);
        }
        return doc as T;
    }

    createSession(role: Role, aiPolicy: string, seed = 0): Promise<CreateSessionResponse> {
        return this.call("POST", "/sessions", { role, ai_policy: aiPolicy, seed });
    }

    getState(sessionId: string): Promise<StateView> {
        return this.call("GET", `/sessions/${sessionId}/state`);
    }

    submitPlan(sessionId: string, actions: PlanActions): Promise<PlanResult> {
        return this.call("POST", `/sessions/${sessionId}/plan`, { actions });
    }

    commitStep(sessionId: string): Promise<StepOutcome> {
        return this.call("POST", `/sessions/${sessionId}/step`);
    }

    whatIf(
        sessionId: string,
        plan: PlanActions,
        opponent: "ai" | PlanActions = "ai",
    ): Promise<WhatIfResult> {
        return this.call("POST", `/sessions/${sessionId}/whatif`, { plan, opponent });
    }

    getAdvice(sessionId: string): Promise<Advice> {
        return this.call("GET", `/sessions/${sessionId}/advice`);
    }

    getRun(sessionId: string): Promise<RunDoc> {
        return this.call("GET", `/sessions/${sessionId}/run`);
    }
}
