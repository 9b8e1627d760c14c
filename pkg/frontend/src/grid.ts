// Virtualization math for the plan grid.  At benchmark scale the grid is
// 70 vulnerability rows by 100 node columns; only the visible window (plus
// overscan) is rendered.

export interface GridViewport {
    scrollTop: number;
    scrollLeft: number;
    viewportHeight: number;
    viewportWidth: number;
    rowHeight: number;
    colWidth: number;
    rowCount: number;
    colCount: number;
    overscan?: number;
}

export interface GridWindow {
    rowStart: number;
    rowEnd: number; // exclusive
    colStart: number;
    colEnd: number; // exclusive
    offsetTop: number;
    offsetLeft: number;
    totalHeight: number;
    totalWidth: number;
}

export function gridWindow(viewport: GridViewport): GridWindow {
    const overscan = viewport.overscan ?? 2;
    const rowStart = Math.max(0, Math.floor(viewport.scrollTop / viewport.rowHeight) - overscan);
    const rowEnd = Math.min(
        viewport.rowCount,
        Math.ceil((viewport.scrollTop + viewport.viewportHeight) / viewport.rowHeight) + overscan,
    );
    const colStart = Math.max(0, Math.floor(viewport.scrollLeft / viewport.colWidth) - overscan);
    const colEnd = Math.min(
        viewport.colCount,
        Math.ceil((viewport.scrollLeft + viewport.viewportWidth) / viewport.colWidth) + overscan,
    );
    return {
        rowStart,
        rowEnd: Math.max(rowStart, rowEnd),
        colStart,
        colEnd: Math.max(colStart, colEnd),
        offsetTop: rowStart * viewport.rowHeight,
        offsetLeft: colStart * viewport.colWidth,
        totalHeight: viewport.rowCount * viewport.rowHeight,
        totalWidth: viewport.colCount * viewport.colWidth,
    };
}
