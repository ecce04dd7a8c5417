"""Command-line entry point wiring the full pipeline.

Commands: discover-inds, induce-bias, learn, evaluate, and demo (an
end-to-end run over the packaged fixture). Every file-producing run also
writes `<out>.manifest.json` recording the resolved configuration and
input digests. Exit codes: 0 success, 1 validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from . import __version__
from .biasgen import induce_bias, read_bias, write_bias
from .errors import AutomodeError, ConfigError, LoadError
from .evaluation import cross_validate, generate_negatives, precision_recall
from .learner import LearnConfig, learn_definition
from .lgg import lgg_learn
from .fixtures import materialize_small
from .profiler import discover_inds, format_ind_set
from .relstore import (
    ExampleSet,
    RelationSchema,
    load_database,
    load_examples,
    register_target,
)


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


def dispatch(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.handler(args)
    except AutomodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="automode",
        description="Learn Datalog definitions with automatically induced language bias.",
    )
    parser.add_argument("--version", action="version", version=f"automode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discover-inds", help="profile the database for unary INDs")
    _data_flags(p, examples_required=False)
    p.add_argument(
        "--alpha",
        "--approx-ind-threshold",
        dest="alpha",
        type=float,
        default=0.5,
        help="error tolerance for approximate INDs (default 0.5)",
    )
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    _common_flags(p)
    p.set_defaults(handler=_cmd_discover_inds)

    p = sub.add_parser("induce-bias", help="generate predicate and mode definitions")
    _data_flags(p, examples_required=True)
    p.add_argument("--alpha", "--approx-ind-threshold", dest="alpha", type=float, default=0.5)
    p.add_argument(
        "--constant-threshold",
        type=int,
        default=5,
        help="attributes with fewer distinct values may appear as constants (default 5)",
    )
    p.add_argument("--out", type=Path, required=True)
    _common_flags(p)
    p.set_defaults(handler=_cmd_induce_bias)

    p = sub.add_parser("learn", help="learn a Horn definition of the target")
    _data_flags(p, examples_required=True, target_required=False)
    p.add_argument("--bias", type=Path, required=True, help="bias file (generated or hand-written)")
    p.add_argument("--out", type=Path, required=True, help="model output file")
    _learn_flags(p)
    _common_flags(p)
    p.set_defaults(handler=_cmd_learn)

    p = sub.add_parser("evaluate", help="k-fold cross validation")
    _data_flags(p, examples_required=True)
    p.add_argument("--bias", type=Path, default=None, help="bias file; induced when omitted")
    p.add_argument("--alpha", "--approx-ind-threshold", dest="alpha", type=float, default=0.5)
    p.add_argument("--constant-threshold", type=int, default=5)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--neg-ratio", type=int, default=2, help="negatives per positive when generating")
    p.add_argument("--report", type=Path, required=True, help="JSON report output")
    _learn_flags(p)
    _common_flags(p)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("demo", help="run the packaged fixture end to end")
    p.add_argument("--out-dir", type=Path, default=Path("automode-demo"))
    _common_flags(p)
    p.set_defaults(handler=_cmd_demo)
    return parser


def _data_flags(p: argparse.ArgumentParser, examples_required: bool, target_required: bool = True) -> None:
    p.add_argument("--schema", type=Path, required=True, help="schema file")
    p.add_argument("--facts", type=Path, required=True, help="directory of per-relation CSVs")
    p.add_argument("--examples", type=Path, required=examples_required)
    p.add_argument("--target", required=examples_required and target_required)


def _learn_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--iterations", type=int, default=2)
    p.add_argument("--beam-width", type=int, default=3)
    p.add_argument("--sample-size", type=int, default=20)
    p.add_argument("--min-precision", type=float, default=0.5)
    p.add_argument("--min-positives", type=int, default=None)
    p.add_argument("--per-relation-cap", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--generalizer", choices=("armg", "lgg"), default="armg")
    p.add_argument(
        "--predicates-only",
        action="store_true",
        help="use only predicate declarations from the bias (implied by --generalizer lgg)",
    )
    p.add_argument("--deep-reduce", action="store_true", help="deep-reduce learned clauses")
    p.add_argument("--lgg-guard", type=int, default=10_000)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=1, help="worker cap (runs are sequential)")


# -- command implementations -------------------------------------------------


def _cmd_discover_inds(args: argparse.Namespace) -> int:
    db = _load(args, register=args.examples is not None and args.target is not None)
    started = time.perf_counter()
    inds = discover_inds(db, args.alpha)
    _note(f"discovered {len(inds.inds)} INDs in {_ms(started)} ms")
    text = format_ind_set(inds)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    args.out.write_text(text, encoding="utf-8")
    _write_manifest(args, args.out, {"alpha": args.alpha})
    return 0


def _cmd_induce_bias(args: argparse.Namespace) -> int:
    if args.constant_threshold < 1:
        raise ConfigError("constant threshold must be >= 1")
    db = _load(args, register=True)
    started = time.perf_counter()
    bias = induce_bias(db, args.target, args.alpha, args.constant_threshold)
    _note(f"bias induction took {_ms(started)} ms")
    args.out.write_text(write_bias(bias), encoding="utf-8")
    _write_manifest(
        args,
        args.out,
        {"alpha": args.alpha, "constant_threshold": args.constant_threshold},
    )
    return 0


def _cmd_learn(args: argparse.Namespace) -> int:
    bias = read_bias(args.bias.read_text(encoding="utf-8"))
    target = args.target or bias.head_mode.relation
    if target != bias.head_mode.relation:
        raise LoadError(
            f"--target {target} does not match the bias head {bias.head_mode.relation}"
        )
    db = load_database(args.schema, args.facts, examples_backed=(target,))
    schema = _target_schema(db, target, len(bias.head_mode.symbols))
    examples = load_examples(args.examples, schema)
    db = register_target(db, examples)
    cfg = _config(args)
    if args.generalizer == "lgg" and bias.modes:
        _note("mode definitions in the bias file are ignored by the lgg generalizer")
    started = time.perf_counter()
    if args.generalizer == "lgg":
        definition = lgg_learn(db, examples, bias.predicates, cfg, guard=args.lgg_guard)
    else:
        definition = learn_definition(
            db, examples, bias, cfg, deep_reduce_clauses=args.deep_reduce
        )
    wall = _ms(started)
    _note(f"learning took {wall} ms; {len(definition.clauses)} clause(s)")
    precision, recall = precision_recall(
        definition, examples.positives, examples.negatives, db
    )
    lines = [str(c) for c in definition.clauses]
    lines.append(f"# train_precision={precision:.6f}")
    lines.append(f"# train_recall={recall:.6f}")
    lines.append(f"# wall_ms={wall}")
    args.out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_manifest(args, args.out, _config_dict(args), extra_inputs=[args.bias])
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    db = load_database(args.schema, args.facts, examples_backed=(args.target,))
    schema = _target_schema(db, args.target, _peek_arity(args.examples, args.target))
    examples = load_examples(args.examples, schema)
    db = register_target(db, examples)
    if not examples.negatives:
        negatives = generate_negatives(
            db, examples.positives, schema, args.neg_ratio, args.seed
        )
        examples = ExampleSet(schema, examples.positives, negatives)
        _note(f"generated {len(negatives)} closed-world negatives")
    if args.bias is not None:
        bias = read_bias(args.bias.read_text(encoding="utf-8"), args.constant_threshold)
    else:
        started = time.perf_counter()
        bias = induce_bias(db, args.target, args.alpha, args.constant_threshold)
        _note(f"bias induction took {_ms(started)} ms")
    cfg = _config(args)
    report = cross_validate(
        db,
        examples,
        bias,
        cfg,
        folds=args.folds,
        seed=args.seed,
        generalizer=args.generalizer,
        lgg_guard=args.lgg_guard,
    )
    args.report.write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(
        args,
        args.report,
        {**_config_dict(args), "folds": args.folds, "neg_ratio": args.neg_ratio},
        extra_inputs=[args.bias] if args.bias else [],
    )
    print(
        f"mean_precision={report.mean_precision:.6f} "
        f"mean_recall={report.mean_recall:.6f} "
        f"mean_wall_ms={report.mean_wall_ms:.1f}"
    )
    _note("note: a definition covering nothing counts as precision 1.0 (vacuous)")
    return 0


def _cmd_demo(args: argparse.Namespace) -> int:
    paths = materialize_small(args.out_dir)
    _note(f"fixture written to {args.out_dir}")
    rc = _cmd_induce_bias(
        argparse.Namespace(
            schema=paths["schema"],
            facts=paths["facts"],
            examples=paths["examples"],
            target="advisedBy",
            alpha=0.5,
            constant_threshold=5,
            out=args.out_dir / "bias.txt",
            command="induce-bias",
            jobs=1,
        )
    )
    if rc != 0:
        return rc
    ns = argparse.Namespace(
        schema=paths["schema"],
        facts=paths["facts"],
        examples=paths["examples"],
        target="advisedBy",
        bias=args.out_dir / "bias.txt",
        out=args.out_dir / "model.dl",
        iterations=2,
        beam_width=3,
        sample_size=20,
        min_precision=0.5,
        min_positives=None,
        per_relation_cap=100,
        seed=1,
        generalizer="armg",
        predicates_only=False,
        deep_reduce=False,
        lgg_guard=10_000,
        command="learn",
        jobs=1,
    )
    rc = _cmd_learn(ns)
    if rc != 0:
        return rc
    model = (args.out_dir / "model.dl").read_text(encoding="utf-8")
    print("learned definition:")
    for line in model.splitlines():
        print(f"  {line}")
    return 0


# -- shared helpers -----------------------------------------------------------


def _load(args: argparse.Namespace, register: bool):
    backed = (args.target,) if args.target else ()
    db = load_database(args.schema, args.facts, examples_backed=backed)
    if register:
        schema = _target_schema(db, args.target, _peek_arity(args.examples, args.target))
        examples = load_examples(args.examples, schema)
        db = register_target(db, examples)
    return db


def _target_schema(db, target: str, arity: int) -> RelationSchema:
    if db.has_relation(target):
        return db.schema(target)
    return RelationSchema(target, tuple(f"a{i}" for i in range(arity)))


def _peek_arity(examples_file: Path, target: str) -> int:
    for raw in Path(examples_file).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(rf"^[+-]\s+{re.escape(target)}\(([^()]*)\)$", line)
        if m:
            return len(m.group(1).split(","))
    raise LoadError(f"{examples_file}: no examples of target {target}")


def _config(args: argparse.Namespace) -> LearnConfig:
    return LearnConfig(
        iterations=args.iterations,
        beam_width=args.beam_width,
        sample_size=args.sample_size,
        min_precision=args.min_precision,
        min_positives=args.min_positives,
        per_relation_cap=args.per_relation_cap,
        rng_seed=args.seed,
    )


def _config_dict(args: argparse.Namespace) -> dict:
    return {
        "iterations": args.iterations,
        "beam_width": args.beam_width,
        "sample_size": args.sample_size,
        "min_precision": args.min_precision,
        "min_positives": args.min_positives,
        "per_relation_cap": args.per_relation_cap,
        "seed": args.seed,
        "generalizer": args.generalizer,
        "deep_reduce": args.deep_reduce,
    }


def _write_manifest(
    args: argparse.Namespace,
    out_path: Path,
    config: dict,
    extra_inputs: list[Path] | None = None,
) -> None:
    inputs: list[Path] = []
    for name in ("schema", "examples"):
        p = getattr(args, name, None)
        if p is not None:
            inputs.append(Path(p))
    facts = getattr(args, "facts", None)
    if facts is not None:
        inputs.extend(sorted(Path(facts).glob("*.csv")))
    inputs.extend(extra_inputs or [])
    manifest = {
        "command": args.command,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in inputs if p.is_file()},
        "tool_version": __version__,
    }
    Path(str(out_path) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _ms(started: float) -> int:
    return int(round((time.perf_counter() - started) * 1000))


def _note(message: str) -> None:
    print(message, file=sys.stderr)


if __name__ == "__main__":
    main()
