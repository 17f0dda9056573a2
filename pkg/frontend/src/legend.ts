/** Legend lookups.  Bin edges and colors come from the API response; the
 * UI only locates a response value inside the response's own scale. */

import type { LegendBin } from "./types.js";

/** Index of the legend bin holding a dBm value (clamped to the scale). */
export function binIndex(value: number, legend: LegendBin[]): number {
  if (value < legend[0].min) {
    return 0;
  }
  for (let i = 0; i < legend.length; i++) {
    if (value < legend[i].max) {
      return i;
    }
  }
  return legend.length - 1;
}

export function colorForValue(value: number, legend: LegendBin[]): string {
  return legend[binIndex(value, legend)].color;
}

export function serverColor(
  index: number,
  palette: string[],
  noCoverageColor: string,
): string {
  if (index < 0 || index >= palette.length) {
    return noCoverageColor;
  }
  return palette[index];
}
