/** Paint plans: which grid cell gets which color.
 *
 * Every color is looked up from fields of the API response (rss values,
 * coverage flags, the best-server index grid, the legend, the palettes);
 * no interpolation between nodes and no signal math happen here.  A plan is
 * plain data so tests can inspect it without a canvas.
 */

import { colorForValue, serverColor } from "./legend.js";
import type { OverlayMode } from "./session.js";
import type { PredictResponse } from "./types.js";

export interface PaintCell {
  row: number; // 0 = southern lattice edge, as in the response grids
  col: number;
  color: string;
}

export interface PaintPlan {
  nx: number;
  ny: number;
  cells: PaintCell[];
}

export function rssLayerPlan(
  response: PredictResponse,
  layerIndex: number,
): PaintPlan {
  const layer = response.layers[layerIndex];
  const cells: PaintCell[] = [];
  for (let row = 0; row < response.lattice.ny; row++) {
    for (let col = 0; col < response.lattice.nx; col++) {
      if (layer.covered[row][col]) {
        cells.push({
          row,
          col,
          color: colorForValue(layer.rss[row][col], response.legend),
        });
      }
    }
  }
  return { nx: response.lattice.nx, ny: response.lattice.ny, cells };
}

/** Merged strongest-signal view: the value rendered at a node is the RSS of
 * the concentrator the response's own best_server grid points at. */
export function rssMergedPlan(response: PredictResponse): PaintPlan {
  const cells: PaintCell[] = [];
  for (let row = 0; row < response.lattice.ny; row++) {
    for (let col = 0; col < response.lattice.nx; col++) {
      const winner = response.best_server[row][col];
      if (winner >= 0) {
        cells.push({
          row,
          col,
          color: colorForValue(
            response.layers[winner].rss[row][col],
            response.legend,
          ),
        });
      }
    }
  }
  return { nx: response.lattice.nx, ny: response.lattice.ny, cells };
}

export function bestServerPlan(response: PredictResponse): PaintPlan {
  const cells: PaintCell[] = [];
  for (let row = 0; row < response.lattice.ny; row++) {
    for (let col = 0; col < response.lattice.nx; col++) {
      cells.push({
        row,
        col,
        color: serverColor(
          response.best_server[row][col],
          response.server_palette,
          response.no_coverage_color,
        ),
      });
    }
  }
  return { nx: response.lattice.nx, ny: response.lattice.ny, cells };
}

function coveredAny(response: PredictResponse, row: number, col: number): boolean {
  return response.layers.some((layer) => layer.covered[row][col] === 1);
}

/** Boundary cells: covered nodes with at least one uncovered or
 * out-of-grid neighbor. */
export function coverageBoundaryPlan(
  response: PredictResponse,
  color = "#ffffff",
): PaintPlan {
  const { nx, ny } = response.lattice;
  const cells: PaintCell[] = [];
  for (let row = 0; row < ny; row++) {
    for (let col = 0; col < nx; col++) {
      if (!coveredAny(response, row, col)) {
        continue;
      }
      const neighbors: Array<[number, number]> = [
        [row - 1, col], [row + 1, col], [row, col - 1], [row, col + 1],
      ];
      const onEdge = neighbors.some(
        ([r, c]) =>
          r < 0 || r >= ny || c < 0 || c >= nx || !coveredAny(response, r, c),
      );
      if (onEdge) {
        cells.push({ row, col, color });
      }
    }
  }
  return { nx, ny, cells };
}

export function planFor(
  response: PredictResponse,
  mode: OverlayMode,
  selectedLayer: number,
): PaintPlan {
  switch (mode) {
    case "rss-per-concentrator":
      return rssLayerPlan(response, selectedLayer);
    case "rss-merged":
      return rssMergedPlan(response);
    case "best-server":
      return bestServerPlan(response);
    case "coverage-boundary":
      return coverageBoundaryPlan(response);
  }
}
