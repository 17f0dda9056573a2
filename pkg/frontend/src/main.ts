/** DOM wiring for the planning page.
 *
 * Click on the map canvas to place a concentrator, drag to move it,
 * right-click to delete; pick its power from the toolbar; every edit marks
 * the overlay stale until the next prediction lands.
 */

import { ApiClient } from "./api.js";
import { canvasSize, drawPlan } from "./canvas.js";
import { planFor } from "./render.js";
import { PlannerSession, TX_POWER_LEVELS, type OverlayMode } from "./session.js";
import type { MapMeta } from "./types.js";

const API_BASE = (window as unknown as { RADIOPLAN_API?: string })
  .RADIOPLAN_API ?? "http://127.0.0.1:8000";

const CELL_PX = 6;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

async function boot(): Promise<void> {
  const client = new ApiClient(API_BASE);
  const session = new PlannerSession();
  const canvas = el<HTMLCanvasElement>("overlay");
  const status = el<HTMLSpanElement>("status");
  const staleBadge = el<HTMLSpanElement>("stale-badge");
  const legendBox = el<HTMLDivElement>("legend");
  const modeSelect = el<HTMLSelectElement>("overlay-mode");
  const powerSelect = el<HTMLSelectElement>("tx-power");
  const stepInput = el<HTMLInputElement>("lattice-step");
  const predictButton = el<HTMLButtonElement>("predict");

  for (const power of TX_POWER_LEVELS) {
    const option = document.createElement("option");
    option.value = String(power);
    option.textContent = `${power} dBm`;
    powerSelect.appendChild(option);
  }

  let meta: MapMeta;
  try {
    meta = await client.getMeta();
  } catch (err) {
    status.textContent = `backend unreachable: ${String(err)}`;
    return;
  }
  status.textContent =
    `map: ${meta.layer_counts.buildings} buildings, ` +
    `${meta.layer_counts.roads} roads, terrain ${meta.terrain_class}`;

  // Lattice defaults: the map bounds expressed back in degrees around the
  // origin (the meta carries local-meter bounds; scale via a rough
  // meters-per-degree at the origin latitude purely for the viewport).
  const mPerDegLat = 111320;
  const mPerDegLon = 111320 * Math.cos((meta.origin.lat * Math.PI) / 180);
  const [minX, minY, maxX, maxY] = meta.bounds;
  const view = {
    west: meta.origin.lon + minX / mPerDegLon,
    east: meta.origin.lon + maxX / mPerDegLon,
    south: meta.origin.lat + minY / mPerDegLat,
    north: meta.origin.lat + maxY / mPerDegLat,
  };
  session.setLattice(
    { lat: view.south, lon: view.west },
    { lat: view.north, lon: view.east },
    Number(stepInput.value) || 8.0,
  );

  function canvasToLonLat(x: number, y: number): { lat: number; lon: number } {
    const lon = view.west + (x / canvas.width) * (view.east - view.west);
    const lat = view.north - (y / canvas.height) * (view.north - view.south);
    return { lat, lon };
  }

  let dragging: number | null = null;

  canvas.addEventListener("mousedown", (event) => {
    const rect = canvas.getBoundingClientRect();
    const { lat, lon } = canvasToLonLat(
      event.clientX - rect.left,
      event.clientY - rect.top,
    );
    if (event.button === 2) {
      const nearest = nearestConcentrator(lat, lon);
      if (nearest !== null) {
        session.remove(nearest);
      }
      return;
    }
    const nearest = nearestConcentrator(lat, lon);
    if (nearest !== null) {
      dragging = nearest;
    } else {
      dragging = session.place(lat, lon, 3.0,
                               Number(powerSelect.value) || 21);
    }
  });
  canvas.addEventListener("contextmenu", (event) => event.preventDefault());
  canvas.addEventListener("mousemove", (event) => {
    if (dragging === null) {
      return;
    }
    const rect = canvas.getBoundingClientRect();
    const { lat, lon } = canvasToLonLat(
      event.clientX - rect.left,
      event.clientY - rect.top,
    );
    session.move(dragging, lat, lon);
  });
  window.addEventListener("mouseup", () => {
    dragging = null;
  });

  function nearestConcentrator(lat: number, lon: number): number | null {
    let best: number | null = null;
    let bestDist = Infinity;
    for (const c of session.concentrators.values()) {
      const d = Math.hypot(c.lat - lat, c.lon - lon);
      if (d < bestDist) {
        bestDist = d;
        best = c.id;
      }
    }
    const pickRadiusDeg = (12 * (view.east - view.west)) / canvas.width;
    return bestDist <= pickRadiusDeg ? best : null;
  }

  modeSelect.addEventListener("change", () => {
    session.setOverlayMode(modeSelect.value as OverlayMode);
  });
  stepInput.addEventListener("change", () => {
    if (session.latticeCornerA && session.latticeCornerB) {
      session.setLattice(session.latticeCornerA, session.latticeCornerB,
                         Number(stepInput.value) || 8.0);
    }
  });
  predictButton.addEventListener("click", () => {
    void session.predict(client);
  });

  session.onChange(() => {
    staleBadge.hidden = !session.stale;
    predictButton.disabled = session.requestInFlight;
    predictButton.textContent = session.requestInFlight
      ? "predicting..." : "predict";
    if (session.lastError) {
      status.textContent = `error: ${session.lastError}`;
    }
    const response = session.lastResponse;
    if (!response) {
      return;
    }
    const plan = planFor(response, session.overlayMode, session.selectedLayer);
    const [w, h] = canvasSize(plan, CELL_PX);
    canvas.width = w;
    canvas.height = h;
    const ctx = canvas.getContext("2d");
    if (ctx) {
      drawPlan(ctx, plan, CELL_PX, session.stale);
    }
    // The legend is rendered verbatim from the response.
    legendBox.innerHTML = "";
    for (const bin of response.legend) {
      const chip = document.createElement("span");
      chip.className = "legend-chip";
      chip.style.background = bin.color;
      chip.title = `${bin.min} to ${bin.max} dBm`;
      chip.textContent = `${bin.min}`;
      legendBox.appendChild(chip);
    }
  });
}

void boot();
