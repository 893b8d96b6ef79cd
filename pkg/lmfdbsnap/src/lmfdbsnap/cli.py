"""Command-line entry point: freeze LMFDB newform records to fixture files."""

from __future__ import annotations

import argparse
import json
import sys

from .snapshot import Client, fetch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmfdb-snapshot")
    parser.add_argument("--labels", nargs="*", default=None,
                        help="explicit newform labels N.k.char.orbit")
    parser.add_argument("--level-max", type=int, default=None,
                        help="search: levels dividing this bound")
    parser.add_argument("--weight-max", type=int, default=None,
                        help="search: weights up to this bound")
    parser.add_argument("--out", required=True, help="fixture file to write")
    parser.add_argument("--manifest", required=True, help="manifest file to write")
    parser.add_argument("--base-url", default=None)
    parser.add_argument("--rate", type=float, default=0.5,
                        help="minimum seconds between API requests")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kwargs = {"rate_s": args.rate}
    if args.base_url:
        kwargs["base_url"] = args.base_url
    client = Client(**kwargs)
    try:
        fixture, manifest = fetch(client, labels=args.labels,
                                  n_max=args.level_max, k_max=args.weight_max)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    with open(args.out, "w") as fh:
        json.dump(fixture, fh, indent=1)
    with open(args.manifest, "w") as fh:
        json.dump(manifest.to_json(), fh, indent=1)
    got, bad = len(manifest.labels), len(manifest.errors)
    print(f"wrote {got} record(s) to {args.out}; {bad} error(s)")
    for label, msg in sorted(manifest.errors.items()):
        print(f"  {label}: {msg}", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
