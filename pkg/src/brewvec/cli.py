"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 data/validation error, 4 I/O error.
"""

import argparse
import csv
import json
import os
import sys

from .errors import BrewvecError
from .ingest import (
    SyntheticSpec,
    build_count_matrix,
    build_dataset,
    generate_synthetic,
    load_checkins,
    write_checkins,
)
from .pca import pca_beer_vectors, project_flavors_2d
from .retrieval import (
    FlavorWeight,
    RankedResult,
    describe_beer,
    flavor_arithmetic,
    profile_search,
    recommend_from_favorites,
    similar_beers,
)
from .server import ApiConfig, run_server
from .store import Aggregates, load_model, save_model
from .training import TrainConfig, train

MODEL_ENV = "BREWVEC_MODEL"


def _emit(result: RankedResult, as_json: bool) -> None:
    if as_json:
        payload = {
            "query": result.query_echo,
            "results": [{"id": i, "score": s} for i, s in result.entries],
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return
    print(f"# {result.query_echo}")
    if not result.entries:
        print("(no results)")
        return
    width = max(len(i) for i, _ in result.entries)
    for rank, (item, score) in enumerate(result.entries, start=1):
        print(f"{rank:>3}  {item:<{width}}  {score:.6f}")


def _parse_flavor_weight(text: str) -> FlavorWeight:
    tag, sep, raw = text.rpartition("=")
    if not sep or not tag:
        raise argparse.ArgumentTypeError(f"expected TAG=WEIGHT, got {text!r}")
    try:
        return FlavorWeight(tag, float(raw))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weight {raw!r} is not a number") from None


def _metric(args) -> str:
    return "cosine" if args.cosine else "dot"


def _load(args):
    model, _ = load_model(args.model)
    return model


def cmd_train(args) -> int:
    checkins = load_checkins(args.input)
    allowed = None
    if args.flavor_vocab:
        with open(args.flavor_vocab, encoding="utf-8") as handle:
            allowed = {line.strip() for line in handle if line.strip()}
    dataset = build_dataset(checkins, min_checkins=args.min_checkins, allowed_flavors=allowed)
    config = TrainConfig(
        dim=args.dim,
        learning_rate=args.lr,
        batch_size=args.batch,
        max_epochs=args.epochs,
        seed=args.seed,
        log_every=args.log_every,
    )
    report = train(
        dataset, config,
        progress=lambda epoch, nll: print(f"epoch {epoch}/{config.max_epochs} nll {nll:.6f}"),
    )
    save_model(report.model, Aggregates.from_dataset(dataset), args.output)
    print(
        f"trained {report.epochs_run} epochs over {len(dataset.pairs)} pairs "
        f"({len(dataset.beer_vocab)} beers, {len(dataset.flavor_vocab)} flavors) "
        f"in {report.wall_time_s:.1f}s; saved to {args.output}",
        file=sys.stderr,
    )
    return 0


def cmd_synth(args) -> int:
    spec = SyntheticSpec(
        n_clusters=args.clusters,
        beers_per_cluster=args.beers_per,
        flavors_per_cluster=args.flavors_per,
        checkins_per_beer=args.checkins_per,
        tags_per_checkin=args.tags_per,
        noise_rate=args.noise,
        seed=args.seed,
    )
    dataset, truth = generate_synthetic(spec)
    write_checkins(dataset.checkins, args.output)

    cluster_of_pool: dict[frozenset, int] = {}
    beer_clusters = {}
    for beer_id in dataset.beer_vocab.beers:
        pool = frozenset(truth[beer_id])
        if pool not in cluster_of_pool:
            cluster_of_pool[pool] = len(cluster_of_pool)
        beer_clusters[beer_id] = cluster_of_pool[pool]
    sidecar = {
        "beer_pools": {b: sorted(truth[b]) for b in dataset.beer_vocab.beers},
        "beer_clusters": beer_clusters,
        "cluster_pools": {str(i): sorted(pool) for pool, i in cluster_of_pool.items()},
    }
    truth_path = f"{args.output}.truth.json"
    with open(truth_path, "w", encoding="utf-8") as handle:
        json.dump(sidecar, handle, indent=2, ensure_ascii=False)
    print(f"wrote {len(dataset.checkins)} check-ins to {args.output}")
    print(f"wrote ground truth to {truth_path}")
    return 0


def cmd_similar(args) -> int:
    _emit(similar_beers(_load(args), args.beer, args.n, _metric(args)), args.json)
    return 0


def cmd_recommend(args) -> int:
    result = recommend_from_favorites(
        _load(args), args.favorites, args.n, aggregate=args.aggregate, metric=_metric(args)
    )
    _emit(result, args.json)
    return 0


def cmd_profile(args) -> int:
    _emit(profile_search(_load(args), args.flavor, args.n, _metric(args)), args.json)
    return 0


def cmd_describe(args) -> int:
    _emit(describe_beer(_load(args), args.beer, args.n, _metric(args)), args.json)
    return 0


def cmd_arith(args) -> int:
    result = flavor_arithmetic(
        _load(args), args.base, args.minus, args.plus, args.n, _metric(args)
    )
    _emit(result, args.json)
    return 0


def cmd_pca_baseline(args) -> int:
    checkins = load_checkins(args.input)
    dataset = build_dataset(checkins, min_checkins=args.min_checkins)
    vectors = pca_beer_vectors(build_count_matrix(dataset), c=args.components)
    with open(args.output, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["beer"] + [f"pc{i + 1}" for i in range(args.components)])
        for beer_id, row in zip(dataset.beer_vocab.beers, vectors):
            writer.writerow([beer_id] + [repr(float(v)) for v in row])
    print(f"wrote {vectors.shape[0]}x{vectors.shape[1]} beer vectors to {args.output}")
    if args.plot:
        from .plotting import save_scatter

        save_scatter(
            vectors[:, 0], vectors[:, 1], dataset.beer_vocab.beers, args.plot,
            "beers in the first two principal components",
        )
        print(f"wrote figure to {args.plot}")
    return 0


def cmd_export_2d(args) -> int:
    model = _load(args)
    coords = project_flavors_2d(model)
    with open(args.output, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["flavor", "x", "y"])
        for tag, (x, y) in zip(model.flavor_vocab.tags, coords):
            writer.writerow([tag, repr(float(x)), repr(float(y))])
    print(f"wrote {coords.shape[0]} flavor coordinates to {args.output}")
    if args.plot:
        from .plotting import save_scatter

        save_scatter(
            coords[:, 0], coords[:, 1], model.flavor_vocab.tags, args.plot,
            "2D projection of the flavor matrix",
        )
        print(f"wrote figure to {args.plot}")
    return 0


def cmd_serve(args) -> int:
    model_path = args.model or os.environ.get(MODEL_ENV)
    if not model_path:
        print(f"error: no model given (use --model or ${MODEL_ENV})", file=sys.stderr)
        return 2
    run_server(ApiConfig(model_path=model_path, bind=args.bind,
                         cors_origin=args.cors, max_n=args.max_n))
    return 0


def _add_query_flags(sub, default_n: int = 10):
    sub.add_argument("--model", required=True, help="model file path")
    sub.add_argument("-n", type=int, default=default_n, help="number of results")
    sub.add_argument("--json", action="store_true", help="emit JSON instead of aligned text")
    sub.add_argument("--cosine", action="store_true", help="rank by cosine instead of dot product")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brewvec",
        description="Flavor embeddings for beers: train, query, export, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model from a check-in file")
    p.add_argument("--input", required=True, help="line-delimited JSON check-in file")
    p.add_argument("--output", required=True, help="model file to write")
    p.add_argument("--dim", type=int, default=5)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--min-checkins", type=int, default=1)
    p.add_argument("--log-every", type=int, default=1)
    p.add_argument("--flavor-vocab", help="optional file of allowed tags, one per line")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("synth", help="generate a clustered synthetic corpus")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--beers-per", type=int, required=True)
    p.add_argument("--flavors-per", type=int, required=True)
    p.add_argument("--checkins-per", type=int, required=True)
    p.add_argument("--tags-per", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="check-in file to write (sidecar: OUTPUT.truth.json)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("similar", help="beers most similar to one beer")
    _add_query_flags(p)
    p.add_argument("--beer", required=True)
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("recommend", help="beers matching a list of favorites")
    _add_query_flags(p)
    p.add_argument("--favorites", nargs="+", required=True, metavar="BEER")
    p.add_argument("--aggregate", choices=("mean", "max"), default="mean")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("profile", help="beers matching a weighted flavor profile")
    _add_query_flags(p)
    p.add_argument(
        "--flavor", dest="flavor", action="append", required=True,
        type=_parse_flavor_weight, metavar="TAG=WEIGHT",
        help="repeatable; weights must sum to 1",
    )
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("describe", help="most prevalent flavors of a beer")
    _add_query_flags(p, default_n=3)
    p.add_argument("--beer", required=True)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("arith", help="flavor arithmetic: base - minus + plus")
    _add_query_flags(p)
    p.add_argument("--base", required=True)
    p.add_argument("--minus", nargs="*", default=[], metavar="TAG")
    p.add_argument("--plus", nargs="*", default=[], metavar="TAG")
    p.set_defaults(func=cmd_arith)

    p = sub.add_parser("pca-baseline", help="PCA beer vectors from the count matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--components", type=int, default=5)
    p.add_argument("--min-checkins", type=int, default=1)
    p.add_argument("--output", required=True, help="CSV to write")
    p.add_argument("--plot", help="optional PNG of the first two components")
    p.set_defaults(func=cmd_pca_baseline)

    p = sub.add_parser("export-2d", help="2D flavor-map coordinates as CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--output", required=True, help="CSV to write (flavor,x,y)")
    p.add_argument("--plot", help="optional PNG scatter of the coordinates")
    p.set_defaults(func=cmd_export_2d)

    p = sub.add_parser("serve", help="serve the HTTP JSON API over a model")
    p.add_argument("--model", help=f"model file (default: ${MODEL_ENV})")
    p.add_argument("--bind", default="127.0.0.1:8642")
    p.add_argument("--cors", default="*", help="allowed CORS origin")
    p.add_argument("--max-n", type=int, default=50)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except BrewvecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
