import type {
  BeerSummary,
  FlavorPoint,
  RankedResponse,
  WeightedFlavor,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function fail(res: Response): Promise<never> {
  let message = `request failed (${res.status})`;
  try {
    const body = await res.json();
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    // non-JSON error body; keep the status message
  }
  throw new ApiError(res.status, message);
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!res.ok) await fail(res);
    return res.json() as Promise<T>;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) await fail(res);
    return res.json() as Promise<T>;
  }

  beers(): Promise<BeerSummary[]> {
    return this.get("/api/beers");
  }

  flavors(): Promise<string[]> {
    return this.get("/api/flavors");
  }

  similar(beerId: string, n: number): Promise<RankedResponse> {
    return this.get(`/api/beers/${encodeURI(beerId)}/similar?n=${n}`);
  }

  beerFlavors(beerId: string, n: number): Promise<RankedResponse> {
    return this.get(`/api/beers/${encodeURI(beerId)}/flavors?n=${n}`);
  }

  recommend(favorites: string[], n: number, aggregate: "mean" | "max"): Promise<RankedResponse> {
    return this.post("/api/recommend", { favorites, n, aggregate });
  }

  profile(flavors: WeightedFlavor[], n: number): Promise<RankedResponse> {
    return this.post("/api/profile", { flavors, n });
  }

  arithmetic(base: string, minus: string[], plus: string[], n: number): Promise<RankedResponse> {
    return this.post("/api/arithmetic", { base, minus, plus, n });
  }

  projection(): Promise<FlavorPoint[]> {
    return this.get("/api/projection/flavors2d");
  }
}
