"""Command-line interface: ``relweights {build,score,classify,verify}``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 solver limit.
"""
from __future__ import annotations

import argparse
import glob
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .core import FunctionSet, RelweightsError
from .corpus import (
    EmptyCorpus,
    EmptyVocabulary,
    TokenizerConfig,
    bag_of_words,
    build_bundle,
    project,
    support_report,
)
from .model import (
    UnreadableModel,
    WeightModel,
    digest,
    load,
    read_matrix_tsv,
    save,
    timestamp,
)
from .oracle import MAX_DIM, oracle_maxmin, oracle_minimax
from .relevance import classify, multi_classify
from .simplex import IterationLimit, SolverError
from .weights import DUALITY_TOL, SLACKNESS_TOL, verify_theorem3

log = logging.getLogger("relweights")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3

BUILD_VIOLATION_LIMIT = 1e-6
ORACLE_TOL = 1e-6


class InputError(RelweightsError):
    pass


def _tokenizer_from_args(args) -> TokenizerConfig:
    stop = None
    if args.stopwords:
        try:
            text = Path(args.stopwords).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read stopwords: {exc}") from exc
        stop = frozenset(w for w in text.split() if w)
    return TokenizerConfig(
        lowercase=args.lowercase, min_token_length=args.min_token_length, stopwords=stop
    )


def _read_corpus_dir(path: Path):
    if not path.is_dir():
        raise InputError(f"{path} is not a directory")
    files = sorted(p for p in path.iterdir() if p.is_file() and p.suffix == ".txt")
    docs = []
    for p in files:
        try:
            docs.append((p.name, p.read_text(encoding="utf-8")))
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot read {p}: {exc}") from exc
    return docs


def _read_matrix(path) -> FunctionSet:
    try:
        return read_matrix_tsv(path)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _emit(args, record: dict, lines: list[str]):
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print("\n".join(lines))


# --------------------------------------------------------------------------
# build
# --------------------------------------------------------------------------

def cmd_build(args) -> int:
    config = None
    bundle = None
    if args.matrix:
        fs = _read_matrix(args.matrix)
        source = str(args.matrix)
        input_digest = digest([Path(args.matrix).read_bytes()])
    else:
        if not args.corpus_dir:
            raise InputError("give a corpus directory or --matrix")
        config = _tokenizer_from_args(args)
        docs = _read_corpus_dir(Path(args.corpus_dir))
        bundle = build_bundle(args.id, docs, config)
        fs = bundle.functions
        source = str(args.corpus_dir)
        input_digest = digest(x for pair in docs for x in pair)

    n_m, n_v = fs.shape
    log.info("corpus %s: %d members, %d domain elements", args.id, n_m, n_v)
    report = verify_theorem3(fs, backend=args.backend, workers=args.workers)
    log.info("duality gap %.3e, max slackness residual %.3e", report.gap, report.max_violation)

    provenance = {
        "created": timestamp(),
        "input_digest": input_digest,
        "source": source,
        "tool_version": __version__,
    }
    model = WeightModel.from_report(args.id, report, config, provenance)
    save(model, args.out)

    sup = model.supporting
    support = sup.primal.support(1e-8)
    lines = [
        f"corpus_id        {args.id}",
        f"members          {n_m}",
        f"domain_size      {n_v}",
        f"alpha_support    {sup.alpha:.12g}",
        f"alpha_cover      {model.covering.alpha:.12g}",
        f"duality_gap      {report.gap:.3e}",
        f"max_violation    {report.max_violation:.3e}",
        f"support_size     {len(support)} ({len(support) / n_v:.2%} of domain)",
        f"model            {args.out}",
    ]
    if bundle is not None:
        top = support_report(sup, bundle, top=10).top_terms
        lines.append("top_terms        " + ", ".join(f"{t}={w:.4f}" for t, w in top))
    _emit(args, {
        "corpus_id": args.id,
        "members": n_m,
        "domain_size": n_v,
        "alpha_support": sup.alpha,
        "alpha_cover": model.covering.alpha,
        "gap": report.gap,
        "max_violation": report.max_violation,
        "support_size": len(support),
        "model": str(args.out),
    }, lines)
    if report.max_violation > BUILD_VIOLATION_LIMIT or report.gap > BUILD_VIOLATION_LIMIT:
        log.error("verification failed: %s", report.slackness_violations[:5])
        return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------
# score / classify
# --------------------------------------------------------------------------

def _load_model(path) -> WeightModel:
    return load(path)


def _text_bag(path, config):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return bag_of_words(text, config or TokenizerConfig())


def _report_lines(rep, label=None) -> list[str]:
    head = [f"input            {label}"] if label else []
    return head + [
        f"corpus_id        {rep.corpus_id}",
        f"r                {rep.r:.12g}",
        f"s                {rep.s:.12g}",
        f"alpha_support    {rep.alpha_support:.12g}",
        f"alpha_cover      {rep.alpha_cover:.12g}",
        f"margin           {rep.margin:.12g}",
        f"scale            {rep.scale:.12g}",
        f"dropped_mass     {rep.dropped_mass:.12g}",
        f"relevant         {str(rep.relevant).lower()}",
    ]


def cmd_score(args) -> int:
    try:
        model = _load_model(args.model)
    except UnreadableModel as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    inputs = []
    if args.matrix:
        fs = _read_matrix(args.matrix)
        for i, label in enumerate(fs.members.labels):
            bag = dict(zip(fs.domain.labels, fs.matrix[i]))
            inputs.append((label, bag))
    elif args.text:
        inputs.append((str(args.text), _text_bag(args.text, model.tokenizer_config)))
    else:
        raise InputError("give a text file or --matrix")

    status = EXIT_OK
    for label, bag in inputs:
        f, dropped = project(bag, model.vocabulary)
        rep = classify(
            f, model.supporting, model.covering, model.corpus_id,
            normalize=args.normalize, dropped_mass=dropped,
        )
        record = {"input": label, **rep.to_dict()}
        _emit(args, record, _report_lines(rep, label))
    return status


def _expand_models(patterns) -> list[str]:
    paths = []
    for pat in patterns:
        hits = sorted(glob.glob(pat))
        paths.extend(hits if hits else [pat])
    seen = set()
    return [p for p in paths if not (p in seen or seen.add(p))]


def cmd_classify(args) -> int:
    models = []
    for path in _expand_models(args.models):
        try:
            models.append(_load_model(path))
        except UnreadableModel as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
    if not models:
        print("error: no loadable models", file=sys.stderr)
        return EXIT_INPUT

    try:
        text = Path(args.text).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {args.text}: {exc}") from exc

    # each model tokenizes with its own build-time configuration
    bags = {}
    entries = []
    for m in models:
        cfg = m.tokenizer_config or TokenizerConfig()
        bags[m.corpus_id] = bag_of_words(text, cfg)
        entries.append((m.corpus_id, m.supporting, m.covering))

    reports = []
    errors = {}
    for corpus_id, sup, cov in entries:
        ranking = multi_classify(bags[corpus_id], [(corpus_id, sup, cov)], args.normalize)
        reports.extend(ranking.reports)
        errors.update(ranking.errors)
    reports.sort(key=lambda rep: (-rep.ratio, rep.corpus_id))
    for cid, err in sorted(errors.items()):
        print(f"warning: {cid}: {err}", file=sys.stderr)

    if args.json:
        for rank, rep in enumerate(reports, 1):
            print(json.dumps({"rank": rank, **rep.to_dict()}, sort_keys=True))
    else:
        print(f"{'rank':>4}  {'corpus_id':<20} {'r/alpha':>12} {'r':>12} {'alpha':>12} {'s':>12}  relevant")
        for rank, rep in enumerate(reports, 1):
            print(
                f"{rank:>4}  {rep.corpus_id:<20} {rep.ratio:>12.6g} {rep.r:>12.6g} "
                f"{rep.alpha_support:>12.6g} {rep.s:>12.6g}  {str(rep.relevant).lower()}"
            )
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def _verify_sets(sets, args) -> int:
    worst_gap = worst_viol = worst_oracle = 0.0
    oracle_runs = 0
    failures = []
    for name, fs in sets:
        rep = verify_theorem3(fs, backend=args.backend)
        worst_gap = max(worst_gap, rep.gap)
        worst_viol = max(worst_viol, rep.max_violation)
        ok = rep.ok
        n_m, n_v = fs.shape
        if n_m <= MAX_DIM and n_v <= MAX_DIM:
            a, _ = oracle_maxmin(fs, backend=args.backend)
            b, _ = oracle_minimax(fs, backend=args.backend)
            diff = max(abs(a - rep.alpha_primal), abs(b - rep.alpha_cover))
            worst_oracle = max(worst_oracle, diff)
            oracle_runs += 1
            ok = ok and diff <= ORACLE_TOL
        if not ok:
            failures.append(name)

    n = len(sets)
    oracle_text = (
        f"{worst_oracle:.3e} over {oracle_runs} instance(s)" if oracle_runs else "skipped (dimensions > 8)"
    )
    lines = [
        f"instances        {n}",
        f"max_gap          {worst_gap:.3e} (tolerance {DUALITY_TOL:g})",
        f"max_violation    {worst_viol:.3e} (tolerance {SLACKNESS_TOL:g})",
        f"oracle_max_diff  {oracle_text}",
        f"failures         {len(failures)}" + (f" ({', '.join(failures[:5])})" if failures else ""),
        f"result           {'ok' if not failures else 'FAILED'}",
    ]
    _emit(args, {
        "instances": n,
        "max_gap": worst_gap,
        "max_violation": worst_viol,
        "oracle_instances": oracle_runs,
        "oracle_max_diff": worst_oracle if oracle_runs else None,
        "failures": failures,
        "ok": not failures,
    }, lines)
    return EXIT_OK if not failures else EXIT_VERIFY


def _verify_model(path, args) -> int:
    try:
        model = _load_model(path)
    except UnreadableModel as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    a_sup, a_cov = model.supporting.alpha, model.covering.alpha
    a_hsup, a_hcov = model.hat_alphas
    gap = max(abs(a_sup - a_hcov), abs(a_cov - a_hsup))
    stored_viol = float(model.verification.get("max_violation", float("nan")))
    ok = gap <= DUALITY_TOL and stored_viol <= SLACKNESS_TOL
    lines = [
        f"model            {path}",
        f"alpha_support    {a_sup:.12g}",
        f"alpha_cover      {a_cov:.12g}",
        f"max_gap          {gap:.3e} (tolerance {DUALITY_TOL:g})",
        f"max_violation    {stored_viol:.3e} (recorded at build time)",
        f"result           {'ok' if ok else 'FAILED'}",
    ]
    _emit(args, {"model": str(path), "max_gap": gap, "max_violation": stored_viol, "ok": ok}, lines)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    if args.random:
        rng = np.random.default_rng(args.seed)
        sets = [
            (f"random#{i}", FunctionSet.from_rows(rng.uniform(0.0, 1.0, (args.rows, args.cols))))
            for i in range(args.random)
        ]
        return _verify_sets(sets, args)
    if not args.input:
        raise InputError("give an input (model, TSV matrix or corpus directory) or --random N")
    path = Path(args.input)
    if path.is_dir():
        bundle = build_bundle(path.name, _read_corpus_dir(path), _tokenizer_from_args(args))
        return _verify_sets([(path.name, bundle.functions)], args)
    if path.suffix == ".json":
        return _verify_model(path, args)
    return _verify_sets([(path.name, _read_matrix(path))], args)


# --------------------------------------------------------------------------

def _add_tokenizer_flags(p):
    p.add_argument("--lowercase", dest="lowercase", action="store_true", default=True)
    p.add_argument("--no-lowercase", dest="lowercase", action="store_false")
    p.add_argument("--min-token-length", type=int, default=2, metavar="N")
    p.add_argument("--stopwords", metavar="FILE", help="whitespace-separated stopword list")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relweights",
        description="Supporting/covering weights and relevance scoring for sets of nonnegative functions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument(
        "--backend", choices=_kernels.available_backends(), default=None,
        help=f"kernel flavour (default: {_kernels.BACKEND})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="solve all four weight problems for a corpus and write a model")
    p.add_argument("corpus_dir", nargs="?", help="directory of UTF-8 .txt files, one document each")
    p.add_argument("--matrix", metavar="TSV", help="read the function set from a TSV matrix instead")
    p.add_argument("--id", required=True, help="corpus id stored in the model")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--workers", type=int, default=1, help="solve the four problems concurrently")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    _add_tokenizer_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("score", help="score one input against one model")
    p.add_argument("model")
    p.add_argument("text", nargs="?", help="text file to score")
    p.add_argument("--matrix", metavar="TSV", help="score every row of a TSV matrix")
    p.add_argument("--normalize", action="store_true",
                   help="rescale the input to the mean member L1 norm before scoring")
    p.add_argument("--json", action="store_true", help="one JSON record per input")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("classify", help="rank several corpus models for one text")
    p.add_argument("models", nargs="+", metavar="MODEL_GLOB",
                   help="model files or glob patterns (quote globs); the text file comes last")
    p.add_argument("text", help="text file to classify")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="check duality and complementary slackness")
    p.add_argument("input", nargs="?", help="model (.json), TSV matrix, or corpus directory")
    p.add_argument("--random", type=int, default=0, metavar="N", help="check N random instances")
    p.add_argument("--rows", type=int, default=6)
    p.add_argument("--cols", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    _add_tokenizer_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (InputError, EmptyCorpus, EmptyVocabulary, UnreadableModel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IterationLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (RelweightsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
