"""Command-line entry points.

    oak serve    --config oak.json          run the HTTP service
    oak ingest   catalog.json               load a defects catalog, then snapshot
    oak bench    --dataset movie --seed 0 --top 1,5,10 [--json]
    oak snapshot save | load                write / verify the on-disk snapshot
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .config import ServiceConfig
from .service import OakService


def _parse_tops(raw: str) -> list[int]:
    try:
        tops = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--top wants comma-separated integers: {exc}")
    if not tops or any(n < 1 for n in tops):
        raise argparse.ArgumentTypeError("--top wants positive integers")
    return tops


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oak", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", default=None, help="path to a JSON config file")

    ingest = sub.add_parser("ingest", help="load a defects catalog and snapshot the result")
    ingest.add_argument("catalog", help="path to catalog.json")
    ingest.add_argument("--config", default=None)

    bench = sub.add_parser("bench", help="run a seeded retrieval benchmark")
    bench.add_argument("--dataset", choices=("movie", "animal", "defect"), required=True)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--top", type=_parse_tops, default=[1, 5, 10])
    bench.add_argument("--json", action="store_true", help="emit the report as JSON")

    snapshot = sub.add_parser("snapshot", help="save or verify the on-disk snapshot")
    snapshot.add_argument("action", choices=("save", "load"))
    snapshot.add_argument("--config", default=None)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "bench":
        service = OakService(ServiceConfig())  # benchmarks are self-contained
        report = service.run_benchmark(args.dataset, args.seed, args.top)
        print(report.to_json() if args.json else report.to_table())
        return 0

    config = ServiceConfig.load(args.config)

    if args.command == "serve":
        import uvicorn

        from .api import create_app
        app = create_app(OakService.open(config))
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
        return 0

    if args.command == "ingest":
        service = OakService.open(config)
        report = service.ingest_catalog(args.catalog)
        if service.data_dir is not None:
            service.save_snapshot()
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return 0

    if args.command == "snapshot":
        if config.data_dir is None:
            print("snapshot requires a data_dir (config file or OAK_DATA_DIR)", file=sys.stderr)
            return 2
        if args.action == "save":
            service = OakService.open(config)
            directory = service.save_snapshot()
            print(f"snapshot written to {directory}")
        else:
            service = OakService.open(config)  # load_snapshot runs inside open()
            print(json.dumps(service.health(), indent=2, sort_keys=True))
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
