/** Wire types of the planning API (mirror of the backend payloads). */

export interface LegendBin {
  min: number;
  max: number;
  color: string;
}

export interface MapMeta {
  bounds: [number, number, number, number];
  terrain_class: string;
  origin: { lat: number; lon: number };
  ground_elevation: number;
  layer_counts: { buildings: number; contours: number; roads: number };
}

export interface ConcentratorRequest {
  lat: number;
  lon: number;
  mast_height: number;
  tx_power: number;
  label: string;
}

export interface PredictRequest {
  concentrators: ConcentratorRequest[];
  lattice: {
    corner_a: { lat: number; lon: number };
    corner_b: { lat: number; lon: number };
    step: number;
  };
}

export interface LayerPayload {
  label: string;
  tx_power: number;
  rss: number[][];
  covered: number[][];
  budget_covered: number[][];
}

export interface PredictResponse {
  lattice: {
    corner_a: { lat: number; lon: number };
    corner_b: { lat: number; lon: number };
    step_x: number;
    step_y: number;
    nx: number;
    ny: number;
  };
  lons: number[];
  lats: number[];
  sensitivity: number;
  legend: LegendBin[];
  no_coverage_color: string;
  server_palette: string[];
  layers: LayerPayload[];
  best_server: number[][];
  inside_building: number[][];
}
