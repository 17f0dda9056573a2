/** A canned two-concentrator /predict response used by the intercept tests.
 * Values are arbitrary but structurally faithful to the backend payload. */

import type { PredictResponse } from "../src/types.js";

export const LEGEND = Array.from({ length: 10 }, (_, i) => ({
  min: -120 + 10 * i,
  max: -110 + 10 * i,
  color: [
    "#26004d", "#3b0f70", "#641a80", "#8c2981", "#b73779",
    "#de4968", "#f7705c", "#fe9f6d", "#fece91", "#fcfdbf",
  ][i],
}));

export function twoConcentratorResponse(): PredictResponse {
  // 3 x 4 grid; concentrator 0 strong in the west, 1 in the east, the
  // south-east corner uncovered.
  const rss0 = [
    [-70.5, -84.0, -99.5, -113.0],
    [-72.0, -86.0, -101.0, -116.0],
    [-71.0, -85.5, -100.0, -118.9],
  ];
  const rss1 = [
    [-112.0, -98.0, -83.0, -71.5],
    [-114.0, -100.5, -85.0, -70.0],
    [-118.0, -102.0, -88.8, -72.5],
  ];
  const covered0 = [
    [1, 1, 1, 0],
    [1, 1, 1, 0],
    [1, 1, 0, 0],
  ];
  const covered1 = [
    [0, 1, 1, 1],
    [0, 1, 1, 1],
    [0, 0, 1, 1],
  ];
  const bestServer = [
    [0, 0, 1, 1],
    [0, 0, 1, 1],
    [0, 0, 1, 1],
  ];
  bestServer[2][0] = 0;
  bestServer[2][1] = 0;
  // The south-west pair is only covered by 0; make one node fully uncovered.
  covered0[2][2] = 0;
  covered1[2][2] = 0;
  bestServer[2][2] = -1;

  return {
    lattice: {
      corner_a: { lat: 44.49, lon: 10.99 },
      corner_b: { lat: 44.51, lon: 11.01 },
      step_x: 8,
      step_y: 8,
      nx: 4,
      ny: 3,
    },
    lons: [10.99, 10.9966, 11.0033, 11.01],
    lats: [44.49, 44.5, 44.51],
    sensitivity: -119,
    legend: LEGEND,
    no_coverage_color: "#15151a",
    server_palette: ["#1f77b4", "#d62728"],
    layers: [
      {
        label: "west",
        tx_power: 21,
        rss: rss0,
        covered: covered0,
        budget_covered: covered0,
      },
      {
        label: "east",
        tx_power: 24,
        rss: rss1,
        covered: covered1,
        budget_covered: covered1,
      },
    ],
    best_server: bestServer,
    inside_building: [
      [0, 0, 0, 0],
      [0, 1, 0, 0],
      [0, 0, 0, 0],
    ],
  };
}
