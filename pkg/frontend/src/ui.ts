// DOM rendering for the console.  Kept thin: all decisions live in the
// store/controller, this file only draws them.

import { ConsoleController } from "./controller.js";
import { gridWindow } from "./grid.js";
import { cellKey, ConsoleStore } from "./store.js";

const ROW_HEIGHT = 22;
const COL_WIDTH = 26;

export class ConsoleUI {
    private root: HTMLElement;
    private banner: HTMLElement;
    private meter: HTMLElement;
    private gridHost: HTMLElement;
    private gridCanvas: HTMLElement;
    private historyHost: HTMLElement;
    private previewHost: HTMLElement;
    private buttons: Record<string, HTMLButtonElement> = {};

    constructor(
        root: HTMLElement,
        private readonly store: ConsoleStore,
        private readonly controller: ConsoleController,
    ) {
        this.root = root;
        root.innerHTML = `
            <div class="banner" hidden></div>
            <div class="toolbar">
                <span class="meter"></span>
                <button data-action="advice">advice</button>
                <button data-action="whatif">what-if</button>
                <button data-action="commit">commit step</button>
            </div>
            <div class="grid-host"><div class="grid-canvas"></div></div>
            <div class="preview"></div>
            <div class="history"></div>
        `;
        this.banner = root.querySelector(".banner")!;
        this.meter = root.querySelector(".meter")!;
        this.gridHost = root.querySelector(".grid-host")!;
        this.gridCanvas = root.querySelector(".grid-canvas")!;
        this.historyHost = root.querySelector(".history")!;
        this.previewHost = root.querySelector(".preview")!;
        for (const button of root.querySelectorAll<HTMLButtonElement>("button[data-action]")) {
            this.buttons[button.dataset.action!] = button;
        }
        this.buttons.advice!.onclick = () => void this.onAdvice();
        this.buttons.whatif!.onclick = () => void this.onWhatIf();
        this.buttons.commit!.onclick = () => void this.onCommit();
        this.gridHost.addEventListener("scroll", () => this.renderGrid());
        this.gridCanvas.addEventListener("click", (event) => {
            const target = event.target as HTMLElement;
            if (target.dataset.vuln === undefined) {
                return;
            }
            const vuln = Number(target.dataset.vuln);
            const node = Number(target.dataset.node);
            if (this.store.toggle(vuln, node)) {
                void this.onToggle();
            }
        });
    }

    private async onToggle(): Promise<void> {
        this.render();
        await this.controller.validateDraft();
        this.render();
    }

    private async onAdvice(): Promise<void> {
        await this.controller.fetchAdvice();
        this.render();
    }

    private async onWhatIf(): Promise<void> {
        const result = await this.controller.whatIf();
        if (result.ok && result.value.ok) {
            const transfers = result.value.transfers ?? [];
            this.previewHost.textContent =
                `preview (non-binding): ${transfers.length} transfer(s), ` +
                `score delta ${JSON.stringify(result.value.score_delta)}`;
        } else if (result.ok) {
            this.previewHost.textContent = `preview rejected: ${result.value.violation}`;
        }
        this.render();
    }

    private async onCommit(): Promise<void> {
        await this.controller.commit();
        this.previewHost.textContent = "";
        this.render();
    }

    render(): void {
        const state = this.store.state;
        this.banner.hidden = this.store.banner === null;
        this.banner.textContent = this.store.banner ?? "";
        if (!state) {
            return;
        }
        const validation = this.store.lastValidation;
        const status = validation
            ? validation.ok
                ? "ok"
                : `blocked: ${validation.violation}`
            : "unvalidated";
        this.meter.textContent =
            `${this.store.role} @ step ${state.time_step} — ` +
            `budget ${this.store.budgetMeter().toFixed(0)} / ${this.store.budgetCap().toFixed(0)} (${status})`;
        this.buttons.commit!.disabled = !this.store.commitEnabled();
        this.buttons.whatif!.disabled = this.store.inflight;
        this.buttons.advice!.disabled = this.store.inflight;
        this.renderGrid();
        this.renderHistory();
    }

    private renderGrid(): void {
        const state = this.store.state;
        if (!state) {
            return;
        }
        const rows = state.catalog.hazard.length;
        const cols = state.nodes.length;
        const view = gridWindow({
            scrollTop: this.gridHost.scrollTop,
            scrollLeft: this.gridHost.scrollLeft,
            viewportHeight: this.gridHost.clientHeight || 400,
            viewportWidth: this.gridHost.clientWidth || 800,
            rowHeight: ROW_HEIGHT,
            colWidth: COL_WIDTH,
            rowCount: rows,
            colCount: cols,
        });
        this.gridCanvas.style.height = `${view.totalHeight}px`;
        this.gridCanvas.style.width = `${view.totalWidth}px`;
        this.gridCanvas.textContent = "";
        for (let row = view.rowStart; row < view.rowEnd; row += 1) {
            for (let col = view.colStart; col < view.colEnd; col += 1) {
                const cell = document.createElement("div");
                cell.className = "cell";
                cell.dataset.vuln = String(row);
                cell.dataset.node = String(col);
                cell.style.top = `${row * ROW_HEIGHT}px`;
                cell.style.left = `${col * COL_WIDTH}px`;
                const key = cellKey(row, col);
                if (!this.store.canAct(row, col)) {
                    cell.classList.add("inert");
                }
                if (this.store.draft.has(key)) {
                    cell.classList.add("drafted");
                }
                if (this.store.adviceCells.has(key)) {
                    cell.classList.add("advised");
                }
                const glyph = this.store.glyphFor(row, col);
                if (glyph) {
                    cell.classList.add(glyph);
                }
                this.gridCanvas.appendChild(cell);
            }
        }
    }

    private renderHistory(): void {
        const consistent = this.store.scoreboardConsistent() ? "" : " (INCONSISTENT)";
        this.historyHost.textContent = this.store.history
            .map(
                (entry) =>
                    `step ${entry.step}: ${entry.transfers.length} transfer(s), ` +
                    `D ${entry.scores.defender} / A ${entry.scores.attacker}${consistent}`,
            )
            .join("\n");
    }
}
