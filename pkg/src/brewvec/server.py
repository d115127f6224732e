"""Read-only HTTP JSON API over one loaded model.

The model is loaded once at startup and never mutated, so every endpoint
is a pure function of the request and request handling needs no locks.
Beer-valued results are enriched with the beer's mean check-in rating and
its three most prevalent flavors; flavor-valued results carry nulls there.
"""

from dataclasses import dataclass

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import retrieval
from .errors import DataError, NotFoundError, ValidationError
from .model import EmbeddingModel
from .pca import project_flavors_2d
from .retrieval import FlavorWeight, RankedResult
from .store import Aggregates, load_model

DEFAULT_BIND = "127.0.0.1:8642"
DEFAULT_MAX_N = 50
DEFAULT_N = 10


@dataclass
class ApiConfig:
    model_path: str
    bind: str = DEFAULT_BIND
    cors_origin: str = "*"
    max_n: int = DEFAULT_MAX_N

    @property
    def host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])


class RecommendRequest(BaseModel):
    favorites: list[str]
    n: int = DEFAULT_N
    aggregate: str = "mean"


class WeightedFlavor(BaseModel):
    tag: str
    weight: float


class ProfileRequest(BaseModel):
    flavors: list[WeightedFlavor]
    n: int = DEFAULT_N


class ArithmeticRequest(BaseModel):
    base: str
    minus: list[str] = []
    plus: list[str] = []
    n: int = DEFAULT_N


def create_app(
    model: EmbeddingModel,
    aggregates: Aggregates,
    max_n: int = DEFAULT_MAX_N,
    cors_origin: str = "*",
) -> FastAPI:
    app = FastAPI(title="brewvec", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    top_flavor_cache: dict[str, list[str]] = {}
    projection_cache: list[dict] = []

    def top_flavors(beer_id: str) -> list[str]:
        if beer_id not in top_flavor_cache:
            hits = retrieval.describe_beer(model, beer_id, retrieval.DESCRIBE_DEFAULT_N)
            top_flavor_cache[beer_id] = hits.ids
        return top_flavor_cache[beer_id]

    def check_n(n: int) -> None:
        if n > max_n:
            raise ValidationError(f"n {n} exceeds the maximum of {max_n}")
        if n < 1:
            raise ValidationError(f"n must be >= 1, got {n}")

    def beer_results(ranked: RankedResult) -> dict:
        return {
            "query": ranked.query_echo,
            "results": [
                {
                    "id": beer_id,
                    "score": score,
                    "mean_rating": aggregates.mean_ratings.get(beer_id),
                    "top_flavors": top_flavors(beer_id),
                }
                for beer_id, score in ranked.entries
            ],
        }

    def flavor_results(ranked: RankedResult) -> dict:
        return {
            "query": ranked.query_echo,
            "results": [
                {"id": tag, "score": score, "mean_rating": None, "top_flavors": None}
                for tag, score in ranked.entries
            ],
        }

    @app.exception_handler(NotFoundError)
    async def _not_found(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=404)

    @app.exception_handler(ValidationError)
    async def _invalid(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=422)

    @app.exception_handler(DataError)
    async def _data_error(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=422)

    @app.exception_handler(RequestValidationError)
    async def _malformed(request, exc):
        return JSONResponse({"error": f"malformed request: {exc.errors()}"}, status_code=400)

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request, exc):
        return JSONResponse({"error": str(exc.detail)}, status_code=exc.status_code)

    @app.get("/api/beers")
    def list_beers():
        return [
            {
                "id": beer_id,
                "checkins": aggregates.checkin_counts.get(beer_id, 0),
                "mean_rating": aggregates.mean_ratings.get(beer_id),
            }
            for beer_id in model.beer_vocab.beers
        ]

    @app.get("/api/flavors")
    def list_flavors():
        return list(model.flavor_vocab.tags)

    @app.get("/api/beers/{beer_id:path}/similar")
    def similar(beer_id: str, n: int = DEFAULT_N):
        check_n(n)
        return beer_results(retrieval.similar_beers(model, beer_id, n))

    @app.get("/api/beers/{beer_id:path}/flavors")
    def describe(beer_id: str, n: int = retrieval.DESCRIBE_DEFAULT_N):
        check_n(n)
        return flavor_results(retrieval.describe_beer(model, beer_id, n))

    @app.post("/api/recommend")
    def recommend(body: RecommendRequest):
        check_n(body.n)
        return beer_results(
            retrieval.recommend_from_favorites(model, body.favorites, body.n, body.aggregate)
        )

    @app.post("/api/profile")
    def profile(body: ProfileRequest):
        check_n(body.n)
        weights = [FlavorWeight(fw.tag, fw.weight) for fw in body.flavors]
        return beer_results(retrieval.profile_search(model, weights, body.n))

    @app.post("/api/arithmetic")
    def arithmetic(body: ArithmeticRequest):
        check_n(body.n)
        return beer_results(
            retrieval.flavor_arithmetic(model, body.base, body.minus, body.plus, body.n)
        )

    @app.get("/api/projection/flavors2d")
    def flavors_2d():
        if not projection_cache:
            coords = project_flavors_2d(model)
            projection_cache.extend(
                {"tag": tag, "x": float(x), "y": float(y)}
                for tag, (x, y) in zip(model.flavor_vocab.tags, coords)
            )
        return projection_cache

    return app


def run_server(config: ApiConfig) -> None:
    """Load the model file and serve until interrupted."""
    import uvicorn

    model, aggregates = load_model(config.model_path)
    app = create_app(model, aggregates, max_n=config.max_n, cors_origin=config.cors_origin)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
