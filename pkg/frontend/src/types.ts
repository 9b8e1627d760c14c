// Payload shapes of the game server's JSON API.

export type Role = "defender" | "attacker";

export interface NodeView {
    node: number;
    value: number;
    reachable: number;
    owner: Role;
    components: number[];
}

export interface StateView {
    session_id: string;
    role: Role;
    ai_policy: string;
    time_step: number;
    budgets: { defender: number; attacker: number; delta: number };
    catalog: { hazard: number[]; patch_cost: number[]; exploit_cost: number[] };
    nodes: NodeView[];
    scores: { defender: number; attacker: number };
    utilities: { defender: number; attacker: number };
    pending: boolean;
    // Defender role only, own nodes only: exploitability bits per node.
    phi?: Record<string, number[]>;
}

export interface CreateSessionResponse {
    session_id: string;
    role: Role;
    ai_policy: string;
}

export interface PlanActions {
    patches?: number[][];
    exploits?: number[][];
}

export interface PlanResult {
    ok: boolean;
    cost: number;
    remaining: number;
    violation?: string;
    coords?: number[] | null;
    message?: string;
}

export interface TransferView {
    node: number;
    from_agent: number;
    to_agent: number;
    value: number;
}

export interface StepOutcome {
    step: number;
    transfers: TransferView[];
    scores: { defender: number; attacker: number };
    utilities: { defender: number; attacker: number };
    state: StateView;
    ai_plan?: { exploits: number[][] };
}

export interface WhatIfResult {
    ok: boolean;
    non_binding: boolean;
    transfers?: TransferView[];
    score_delta?: { defender: number; attacker: number };
    violation?: string;
    message?: string;
}

export interface AdviceItem {
    vuln: number;
    node: number;
    opponent_frequency: number;
    expected_value: number;
    weight: number;
    selected: boolean;
}

export interface Advice {
    plan: PlanActions;
    rationale: AdviceItem[];
    belief_source: "history" | "default";
}

export interface RunStepDoc {
    defender_plan: { acting_agent: number; patches: number[][]; exploits: number[][] };
    attacker_plan: { acting_agent: number; patches: number[][]; exploits: number[][] };
    transfers: [number, number, number, number][];
}

export interface RunDoc {
    schema_version: number;
    kind: "run";
    steps: RunStepDoc[];
}

export interface ApiErrorBody {
    code: number;
    message: string;
    violation?: string;
}
