/** Draw a paint plan onto a canvas: one filled rectangle per lattice node
 * (row 0 of the grids is the southern edge, so rows are flipped). */

import type { PaintPlan } from "./render.js";

export function drawPlan(
  ctx: CanvasRenderingContext2D,
  plan: PaintPlan,
  cellSize: number,
  dim = false,
): void {
  ctx.clearRect(0, 0, plan.nx * cellSize, plan.ny * cellSize);
  ctx.globalAlpha = dim ? 0.35 : 1.0;
  for (const cell of plan.cells) {
    ctx.fillStyle = cell.color;
    ctx.fillRect(
      cell.col * cellSize,
      (plan.ny - 1 - cell.row) * cellSize,
      cellSize,
      cellSize,
    );
  }
  ctx.globalAlpha = 1.0;
}

export function canvasSize(plan: PaintPlan, cellSize: number): [number, number] {
  return [plan.nx * cellSize, plan.ny * cellSize];
}
