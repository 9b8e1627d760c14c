import { describe, expect, it } from "vitest";

import { gridWindow } from "../src/grid.js";

const BENCHMARK = {
    rowCount: 70, // vulnerabilities
    colCount: 100, // nodes
    rowHeight: 22,
    colWidth: 26,
    viewportHeight: 440,
    viewportWidth: 780,
};

describe("grid virtualization", () => {
    it("renders only the visible window plus overscan at benchmark scale", () => {
        const view = gridWindow({ ...BENCHMARK, scrollTop: 0, scrollLeft: 0, overscan: 2 });
        expect(view.rowStart).toBe(0);
        expect(view.rowEnd).toBe(22); // ceil(440/22) + 2
        expect(view.colStart).toBe(0);
        expect(view.colEnd).toBe(32); // ceil(780/26) + 2
        const cells = (view.rowEnd - view.rowStart) * (view.colEnd - view.colStart);
        expect(cells).toBeLessThan(70 * 100 * 0.15);
    });

    it("clamps at the far edge and keeps offsets aligned to the window", () => {
        const view = gridWindow({
            ...BENCHMARK,
            scrollTop: 70 * 22, // past the end
            scrollLeft: 100 * 26,
            overscan: 2,
        });
        expect(view.rowEnd).toBe(70);
        expect(view.colEnd).toBe(100);
        expect(view.rowStart).toBeLessThanOrEqual(view.rowEnd);
        expect(view.offsetTop).toBe(view.rowStart * 22);
        expect(view.offsetLeft).toBe(view.colStart * 26);
    });

    it("reports the full scrollable extent", () => {
        const view = gridWindow({ ...BENCHMARK, scrollTop: 0, scrollLeft: 0 });
        expect(view.totalHeight).toBe(70 * 22);
        expect(view.totalWidth).toBe(100 * 26);
    });

    it("moves the window with scroll position", () => {
        const view = gridWindow({ ...BENCHMARK, scrollTop: 10 * 22, scrollLeft: 40 * 26, overscan: 1 });
        expect(view.rowStart).toBe(9);
        expect(view.colStart).toBe(39);
        expect(view.rowEnd).toBe(10 + 20 + 1);
        expect(view.colEnd).toBe(40 + 30 + 1);
    });
});
