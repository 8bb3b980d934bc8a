"""Command-line surface: key | iso | ci | classify | verify | witness.

Exit codes: 0 success or agreement, 2 usage and parse errors,
3 mathematical disagreement, 4 capability refusal (oracle cutoff).

Machine-readable output comes from ``--format json`` or ``--format csv``;
output is byte-identical for identical inputs and config, regardless of the
worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import engine
from .cayley import (
    ConnectionSet,
    OracleCutoffError,
    brute_force_isomorphism,
    build_cayley,
)
from .engine import ClassificationReport, DisagreementError
from .keys import key_of_set, key_partition
from .zn import DomainError


@dataclass
class RunConfig:
    oracle_cutoff: int = 12
    solving_set_cache_limit: int = 10_000
    workers: int = 1
    output_format: str = "text"
    seed: int = 0  # reserved for sampled property checks

    def __post_init__(self) -> None:
        if self.oracle_cutoff < 2:
            raise DomainError("oracle_cutoff must be at least 2")
        if self.workers < 1:
            raise DomainError("workers must be at least 1")
        if self.output_format not in ("json", "csv", "text"):
            raise DomainError("output_format must be json, csv or text")


_INT_FIELDS = ("oracle_cutoff", "solving_set_cache_limit", "workers", "seed")


def _load_config_file(path: Path) -> dict:
    known = {f.name for f in fields(RunConfig)}
    values: dict = {}
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise DomainError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value")
        name, _, value = line.partition("=")
        name = name.strip()
        value = value.strip()
        if name not in known:
            raise DomainError(f"{path}:{lineno}: unknown config key {name!r}")
        if name in _INT_FIELDS:
            try:
                values[name] = int(value)
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {name} must be an integer") from exc
        else:
            values[name] = value
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file, then CIRC_WORKERS, then explicit flags."""
    values: dict = {}
    if args.config is not None:
        values.update(_load_config_file(args.config))
    env_workers = os.environ.get("CIRC_WORKERS")
    if env_workers is not None:
        try:
            values["workers"] = int(env_workers)
        except ValueError as exc:
            raise DomainError("CIRC_WORKERS must be an integer") from exc
    if args.workers is not None:
        values["workers"] = args.workers
    if args.oracle_cutoff is not None:
        values["oracle_cutoff"] = args.oracle_cutoff
    if args.format is not None:
        values["output_format"] = args.format
    if args.seed is not None:
        values["seed"] = args.seed
    return RunConfig(**values)


def parse_residues(text: str, n: int) -> tuple[int, ...]:
    """Comma-separated integers, taken literally mod n; 0 is rejected."""
    text = text.strip()
    if not text:
        return ()
    members = set()
    for token in text.split(","):
        token = token.strip()
        try:
            value = int(token)
        except ValueError as exc:
            raise DomainError(f"cannot parse residue {token!r}") from exc
        value %= n
        if value == 0:
            raise DomainError("0 is not allowed in a connection set")
        members.add(value)
    return tuple(sorted(members))


def _make_set(n: int, text: str, mode: str, close_inverses: bool) -> ConnectionSet:
    if n < 2:
        raise DomainError("modulus must be at least 2")
    members = set(parse_residues(text, n))
    if close_inverses:
        members |= {(-x) % n for x in members}
    return ConnectionSet(n, tuple(sorted(members)), mode)


def _compact(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _print_csv(header: list[str], rows: list[list]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _bool_word(value: bool | None) -> str:
    if value is None:
        return "n/a"
    return "true" if value else "false"


def cmd_key(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _make_set(args.n, args.set, "digraph", False)
    k = key_of_set(s)
    obj = {"n": args.n, "set": list(s.members), "key": k.as_lists()}
    if args.partition:
        obj["partition"] = [list(c) for c in key_partition(k).classes]
    if cfg.output_format == "json":
        print(json.dumps(obj))
    elif cfg.output_format == "csv":
        header = ["n", "set", "key"] + (["partition"] if args.partition else [])
        row = [args.n, _compact(obj["set"]), _compact(obj["key"])]
        if args.partition:
            row.append(_compact(obj["partition"]))
        _print_csv(header, [row])
    else:
        print(_compact(obj["key"]))
        if args.partition:
            print(_compact(obj["partition"]))
    return 0


def cmd_iso(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _make_set(args.n, args.s, args.mode, args.close_inverses)
    t = _make_set(args.n, args.t, args.mode, args.close_inverses)
    verdict = engine.muzychuk_isomorphic(s, t)
    obj = {
        "n": args.n,
        "s": list(s.members),
        "t": list(t.members),
        "mode": args.mode,
        "isomorphic": verdict.isomorphic,
        "reason": verdict.reason,
        "multiplier": (
            verdict.witness_multiplier.as_lists()
            if verdict.witness_multiplier is not None
            else None
        ),
    }
    code = 0
    if args.oracle:
        mapping = brute_force_isomorphism(
            build_cayley(s), build_cayley(t), oracle_cutoff=cfg.oracle_cutoff
        )
        obj["oracle"] = mapping is not None
        obj["agree"] = obj["oracle"] == verdict.isomorphic
        if not obj["agree"]:
            code = 3
    if cfg.output_format == "json":
        print(json.dumps(obj))
    elif cfg.output_format == "csv":
        header = list(obj)
        _print_csv(
            header,
            [[_compact(v) if isinstance(v, list) else v for v in obj.values()]],
        )
    else:
        if verdict.isomorphic:
            print(f"isomorphic, multiplier {_compact(obj['multiplier'])}")
        else:
            print(f"not isomorphic ({verdict.reason})")
        if args.oracle:
            word = "isomorphic" if obj["oracle"] else "not isomorphic"
            print(f"oracle: {word}, agree: {_bool_word(obj['agree'])}")
    return code


def cmd_ci(args: argparse.Namespace, cfg: RunConfig) -> int:
    s = _make_set(args.n, args.set, args.mode, args.close_inverses)
    verdict = engine.decide_ci(s)
    obj = {
        "n": args.n,
        "set": list(s.members),
        "mode": args.mode,
        "is_ci": verdict.is_ci,
        "fast_path": verdict.fast_path,
        "witness": list(verdict.witness.members) if verdict.witness else None,
    }
    if cfg.output_format == "json":
        print(json.dumps(obj))
    elif cfg.output_format == "csv":
        header = list(obj)
        _print_csv(
            header,
            [[_compact(v) if isinstance(v, list) else v for v in obj.values()]],
        )
    else:
        if verdict.is_ci:
            suffix = "" if verdict.fast_path == "none" else f" (fast path {verdict.fast_path})"
            print(f"CI{suffix}")
        else:
            print(f"non-CI, witness {','.join(map(str, verdict.witness.members))}")
    return 0


def _report_obj(r: ClassificationReport) -> dict:
    return {
        "n": r.n,
        "m": r.m,
        "mode": r.mode,
        "property": r.property_holds,
        "predicate": r.predicate_value,
        "agree": r.agreement,
        "counterexamples": [
            {"set": list(s.members), "witness": list(w.members)}
            for s, w in r.counterexamples
        ],
    }


def _emit_reports(reports: tuple[ClassificationReport, ...], cfg: RunConfig) -> None:
    objs = [_report_obj(r) for r in reports]
    if cfg.output_format == "json":
        print(json.dumps({"rows": objs}))
    elif cfg.output_format == "csv":
        header = ["n", "m", "mode", "property", "predicate", "agree", "counterexamples"]
        rows = [
            [
                o["n"], o["m"], o["mode"],
                _bool_word(o["property"]),
                _bool_word(o["predicate"]),
                _bool_word(o["agree"]),
                _compact(o["counterexamples"]),
            ]
            for o in objs
        ]
        _print_csv(header, rows)
    else:
        for o in objs:
            line = (
                f"n={o['n']} m={o['m']} {o['mode']}: "
                f"property {_bool_word(o['property'])}, "
                f"predicate {_bool_word(o['predicate'])}"
            )
            if o["agree"] is not None:
                line += ", agree" if o["agree"] else ", DISAGREE"
            if o["counterexamples"]:
                line += f", counterexamples: {len(o['counterexamples'])}"
            print(line)


def _finish_reports(
    reports: tuple[ClassificationReport, ...], cfg: RunConfig, dump_path: Path
) -> int:
    _emit_reports(reports, cfg)
    bad = [r for r in reports if r.agreement is False]
    if bad:
        dump_path.write_text(json.dumps({"rows": [_report_obj(r) for r in bad]}, indent=2))
        print(f"disagreements dumped to {dump_path}", file=sys.stderr)
        return 3
    return 0


def cmd_classify(args: argparse.Namespace, cfg: RunConfig) -> int:
    report = engine.is_m_group(args.n, args.m, args.mode)
    return _finish_reports((report,), cfg, args.dump)


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    try:
        reports = engine.verify_theorems(
            args.n_max, args.m_max, args.mode, workers=cfg.workers
        )
    except DisagreementError as exc:
        reports = exc.reports
    return _finish_reports(reports, cfg, args.dump)


def cmd_witness(args: argparse.Namespace, cfg: RunConfig) -> int:
    families = engine.witnesses(args.n, args.mode)
    objs = [
        {
            "family": w.family,
            "set": list(w.connection_set.members),
            "non_ci_confirmed": True,
        }
        for w in families
    ]
    if cfg.output_format == "json":
        print(json.dumps({"n": args.n, "mode": args.mode, "families": objs}))
    elif cfg.output_format == "csv":
        _print_csv(
            ["family", "set", "non_ci_confirmed"],
            [[o["family"], _compact(o["set"]), "true"] for o in objs],
        )
    else:
        if not objs:
            print("no applicable witness families")
        for o in objs:
            members = ",".join(map(str, o["set"]))
            print(f"{{{members}}}: non-CI confirmed ({o['family']})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circulant-ci",
        description="Exact isomorphism and CI-property engine for circulant (di)graphs.",
    )
    parser.add_argument("--format", choices=("json", "csv", "text"), default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--oracle-cutoff", type=int, default=None, dest="oracle_cutoff")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--config", type=Path, default=None,
                        help="key=value file mirroring the run configuration")
    sub = parser.add_subparsers(dest="command", required=True)

    p_key = sub.add_parser("key", help="key of a connection set")
    p_key.add_argument("n", type=int)
    p_key.add_argument("set")
    p_key.add_argument("--partition", action="store_true",
                       help="also print the key partition")
    p_key.set_defaults(func=cmd_key)

    p_iso = sub.add_parser("iso", help="decide isomorphism of two circulants")
    p_iso.add_argument("n", type=int)
    p_iso.add_argument("s")
    p_iso.add_argument("t")
    p_iso.add_argument("--mode", choices=("digraph", "graph"), default="digraph")
    p_iso.add_argument("--oracle", action="store_true",
                       help="cross-check against the brute-force oracle")
    p_iso.add_argument("--close-inverses", action="store_true")
    p_iso.set_defaults(func=cmd_iso)

    p_ci = sub.add_parser("ci", help="decide the CI property of a connection set")
    p_ci.add_argument("n", type=int)
    p_ci.add_argument("set")
    p_ci.add_argument("--mode", choices=("digraph", "graph"), default="digraph")
    p_ci.add_argument("--close-inverses", action="store_true")
    p_ci.set_defaults(func=cmd_ci)

    p_cls = sub.add_parser("classify", help="exhaustive group property at one (n, m)")
    p_cls.add_argument("n", type=int)
    p_cls.add_argument("m", type=int)
    p_cls.add_argument("--mode", choices=("digraph", "graph"), default="digraph")
    p_cls.add_argument("--dump", type=Path, default=Path("ci_disagreements.json"))
    p_cls.set_defaults(func=cmd_classify)

    p_ver = sub.add_parser("verify", help="sweep all cells against the predicates")
    p_ver.add_argument("--n-max", type=int, default=12, dest="n_max")
    p_ver.add_argument("--m-max", type=int, default=6, dest="m_max")
    p_ver.add_argument("--mode", choices=("digraph", "graph"), default="digraph")
    p_ver.add_argument("--dump", type=Path, default=Path("ci_disagreements.json"))
    p_ver.set_defaults(func=cmd_verify)

    p_wit = sub.add_parser("witness", help="explicit non-CI families for n")
    p_wit.add_argument("n", type=int)
    p_wit.add_argument("--mode", choices=("digraph", "graph"), default="digraph")
    p_wit.set_defaults(func=cmd_witness)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        engine.MATERIALIZE_LIMIT = cfg.solving_set_cache_limit
        return args.func(args, cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleCutoffError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
