"""Command line entry point: one subcommand per suite plus ``report``."""
import argparse
import json
import sys

from . import suites


def _load_config(path):
    if path is None:
        return None
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise SystemExit(f"{path}: config must be a JSON object")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parabolic-lab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in [*suites.SUITES, "report"]:
        p = sub.add_parser(name)
        p.add_argument("config", nargs="?", help="JSON file overriding the suite defaults")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", type=int, default=None, help="base grid size (coarse level)")
        p.add_argument("--out", default="results", help="output directory")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _load_config(args.config)
    if args.command == "report":
        res = suites.report(config, args.seed, args.grid, out_dir=args.out)
    else:
        res = suites.SUITES[args.command](config, args.seed, args.grid)
        if args.command == "gen-corpus":
            suites.write_corpus(res, args.out)
    paths = suites.emit_report(res, args.out)
    if not suites.validate_csv(paths["csv"], res.header):
        print(f"{paths['csv']}: malformed CSV", file=sys.stderr)
        return 1
    for key, ok in sorted(res.predicates.items()):
        print(f"{'PASS' if ok else 'FAIL'}  {res.name}.{key}")
    return 0 if res.passed() else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
