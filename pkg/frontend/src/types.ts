export interface BeerSummary {
  id: string;
  checkins: number;
  mean_rating: number | null;
}

export interface RankedRow {
  id: string;
  score: number;
  mean_rating: number | null;
  top_flavors: string[] | null;
}

export interface RankedResponse {
  query: string;
  results: RankedRow[];
}

export interface FlavorPoint {
  tag: string;
  x: number;
  y: number;
}

export interface WeightedFlavor {
  tag: string;
  weight: number;
}
