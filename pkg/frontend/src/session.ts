/** Client-side planner session: placed concentrators, the last raster
 * response, overlay staleness and the single-in-flight request rule.
 *
 * The session never computes signal values; it only stores the last API
 * response and flags it stale whenever an input that influenced it changes.
 * A new prediction request cancels the one in flight.
 */

import type { PredictClient } from "./api.js";
import type {
  ConcentratorRequest,
  LegendBin,
  PredictRequest,
  PredictResponse,
} from "./types.js";

export interface PlacedConcentrator extends ConcentratorRequest {
  id: number;
}

export type OverlayMode =
  | "rss-per-concentrator"
  | "rss-merged"
  | "best-server"
  | "coverage-boundary";

export const TX_POWER_LEVELS = [21, 24, 27, 30];

export class PlannerSession {
  private nextId = 1;

  readonly concentrators = new Map<number, PlacedConcentrator>();

  latticeCornerA: { lat: number; lon: number } | null = null;
  latticeCornerB: { lat: number; lon: number } | null = null;
  latticeStep = 8.0;

  overlayMode: OverlayMode = "rss-merged";
  selectedLayer = 0;

  lastResponse: PredictResponse | null = null;
  stale = false;
  lastError: string | null = null;

  private inflight: AbortController | null = null;
  private listeners: Array<() => void> = [];

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  /** The legend shown in the UI is exactly the one the backend returned. */
  get legend(): LegendBin[] {
    return this.lastResponse ? this.lastResponse.legend : [];
  }

  get requestInFlight(): boolean {
    return this.inflight !== null;
  }

  private invalidate(): void {
    if (this.lastResponse !== null) {
      this.stale = true;
    }
    this.notify();
  }

  place(lat: number, lon: number, mastHeight = 3.0, txPower = 21): number {
    const id = this.nextId++;
    this.concentrators.set(id, {
      id,
      lat,
      lon,
      mast_height: mastHeight,
      tx_power: txPower,
      label: `c${id}`,
    });
    this.invalidate();
    return id;
  }

  move(id: number, lat: number, lon: number): void {
    const existing = this.concentrators.get(id);
    if (!existing) {
      return;
    }
    this.concentrators.set(id, { ...existing, lat, lon });
    this.invalidate();
  }

  remove(id: number): void {
    if (this.concentrators.delete(id)) {
      this.invalidate();
    }
  }

  setTxPower(id: number, txPower: number): void {
    if (!TX_POWER_LEVELS.includes(txPower)) {
      throw new Error(`tx power ${txPower} is not one of ${TX_POWER_LEVELS}`);
    }
    const existing = this.concentrators.get(id);
    if (!existing) {
      return;
    }
    this.concentrators.set(id, { ...existing, tx_power: txPower });
    this.invalidate();
  }

  setLattice(
    cornerA: { lat: number; lon: number },
    cornerB: { lat: number; lon: number },
    step: number,
  ): void {
    this.latticeCornerA = cornerA;
    this.latticeCornerB = cornerB;
    this.latticeStep = step;
    this.invalidate();
  }

  setOverlayMode(mode: OverlayMode, layer = 0): void {
    this.overlayMode = mode;
    this.selectedLayer = layer;
    this.notify(); // a view switch does not make the data stale
  }

  buildRequest(): PredictRequest {
    if (!this.latticeCornerA || !this.latticeCornerB) {
      throw new Error("lattice corners are not set");
    }
    if (this.concentrators.size === 0) {
      throw new Error("place at least one concentrator");
    }
    return {
      concentrators: [...this.concentrators.values()].map(
        ({ id: _id, ...rest }) => rest,
      ),
      lattice: {
        corner_a: this.latticeCornerA,
        corner_b: this.latticeCornerB,
        step: this.latticeStep,
      },
    };
  }

  /** Request a prediction; a request already in flight is cancelled. */
  async predict(client: PredictClient): Promise<PredictResponse | null> {
    const request = this.buildRequest();
    if (this.inflight) {
      this.inflight.abort();
    }
    const controller = new AbortController();
    this.inflight = controller;
    this.notify();
    try {
      const response = await client.predict(request, controller.signal);
      if (this.inflight !== controller) {
        return null; // superseded by a newer request
      }
      this.lastResponse = response;
      this.stale = false;
      this.lastError = null;
      return response;
    } catch (err) {
      if (controller.signal.aborted) {
        return null; // cancelled on purpose; session state untouched
      }
      this.lastError = err instanceof Error ? err.message : String(err);
      return null;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
      this.notify();
    }
  }
}
