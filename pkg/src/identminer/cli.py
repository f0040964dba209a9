"""Command-line surface: lexicon-build, dataset-build, tune, train, evaluate,
analyze. Every subcommand resolves defaults < config file < flags, embeds a
hash of the semantic config in its outputs, and derives all randomness from
one root seed, so reruns with the same config and seed are byte-identical and
results never depend on --workers.

Exit codes: 0 success, 1 usage error, 2 data error. Logging level comes from
the IDENTMINER_LOG environment variable (error, info, debug).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from pathlib import Path

from . import analytics, resources
from .datasets import (build_cb, build_hf, build_qb, match_reports,
                       merge_candidates, read_dataset_tsv, write_dataset_tsv)
from .evaluation import evaluate, format_report_table
from .filters import CLASS_ORDER, FILTER_NAMES, FilterConfig, apply_filter_chain
from .ingest import ParseFailure, UserRecord, dedupe_latest, parse_user_line
from .models import (TrainConfig, UnigramModel, baseline_majority,
                     baseline_random, build_vocab, effective_weight_histogram,
                     example_weights, featurize_user, inverse_class_weights,
                     load_model, name_meta_features, read_embeddings,
                     save_model, train_name_cnn, train_unigram)
from .scorer import ScoreParams, read_tuning_tsv, score_description, tune_params
from .textprep import SelfReportLexicon, build_selfreport_lexicon
from .util import DataError, config_hash, pmap_ordered, stage_seed, write_json

logger = logging.getLogger("identminer")

# semantic configuration: part of the config hash; execution details
# (paths, --out, --workers) deliberately are not
DEFAULTS = {
    "window": 5,
    "threshold": 0.35,
    "weighting": "simple",
    "filters": ["color", "plural", "bigram", "quote"],
    "allow_im": False,
    "min_count": 2,
    "max_tweets": 200,
    "learning_rate": 0.1,
    "epochs": 20,
    "l2_strength": 1e-4,
    "instance_downweight": 1.0,
    "batch_size": 64,
    "min_char_count": 5,
    "setting": "imbalanced",
    "seed": 0,
    "kind": None,
    "model": "unigram",
    "cb_k": None,
    "sage_lambda": 1.0,
    "top_n": 20,
    "tau_ks": [20, 50],
    "grid_windows": list(range(1, 11)),
    "grid_thresholds": [round(0.05 * i, 2) for i in range(1, 20)],
    "grid_weightings": ["simple", "tfidf"],
}

_PATH_KEYS = ("corpus", "out", "lexicon", "tag_lexicon", "tuning", "train_data",
              "test_data", "model_file", "embeddings", "data",
              "colors_file", "blocklist_file")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the documented usage exit code is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _setup_logging() -> None:
    level_name = os.environ.get("IDENTMINER_LOG", "error").lower()
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(level_name, logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    logger.setLevel(level)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="identminer",
                     description="self-report mining and group modeling pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--corpus", help="JSON-lines corpus path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, help="root random seed")
        p.add_argument("--workers", type=int, default=1,
                       help="corpus-level parallelism (results are invariant)")
        p.add_argument("--tag-lexicon", dest="tag_lexicon",
                       help="word<TAB>tag TSV overriding the bundled tagger")
        p.add_argument("--lexicon", help="self-report lexicon TSV")

    p = sub.add_parser("lexicon-build", help="induce the self-report lexicon")
    common(p)
    p.set_defaults(func=cmd_lexicon_build)

    p = sub.add_parser("dataset-build", help="build the qb, hf, or cb dataset")
    common(p)
    p.add_argument("--kind", choices=["qb", "hf", "cb"], help="dataset kind")
    p.add_argument("--filters",
                   help="comma list from color,plural,bigram,quote (empty for none)")
    p.add_argument("--window", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--weighting", choices=["simple", "tfidf"])
    p.set_defaults(func=cmd_dataset_build)

    p = sub.add_parser("tune", help="grid-search score hyperparameters")
    common(p)
    p.add_argument("--tuning", help="user_id<TAB>label<TAB>annotator TSV")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("train", help="train a classifier")
    common(p)
    p.add_argument("--model", choices=["unigram", "namecnn", "baseline-random",
                                       "baseline-majority"])
    p.add_argument("--train-data", dest="train_data", help="dataset TSV")
    p.add_argument("--embeddings", help="user_id<TAB>floats TSV feature override")
    p.add_argument("--epochs", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a trained model on a test set")
    common(p)
    p.add_argument("--model-file", dest="model_file", help="saved model JSON")
    p.add_argument("--test-data", dest="test_data", help="dataset TSV")
    p.add_argument("--setting", choices=["imbalanced", "balanced"])
    p.add_argument("--embeddings", help="user_id<TAB>floats TSV feature override")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze", help="group-level lexical and behavioral statistics")
    common(p)
    p.add_argument("--data", help="labeled dataset TSV defining the groups")
    p.set_defaults(func=cmd_analyze)
    return parser


def _resolve(args: argparse.Namespace) -> tuple[dict, dict]:
    """defaults < config file < flags; returns (semantic config, paths)."""
    config = dict(DEFAULTS)
    paths: dict[str, str | None] = {key: None for key in _PATH_KEYS}
    if args.config:
        if not Path(args.config).is_file():
            raise DataError(f"config file not found: {args.config}")
        try:
            with open(args.config, encoding="utf-8") as handle:
                loaded = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DataError(f"bad config JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise DataError("config file must hold a JSON object")
        for key, value in loaded.items():
            if key in _PATH_KEYS:
                paths[key] = value
            elif key in DEFAULTS:
                config[key] = value
            else:
                raise DataError(f"unknown config key {key!r}")
    for key in _PATH_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            paths[key] = value
    for key in ("seed", "kind", "model", "setting", "window", "threshold",
                "weighting", "epochs"):
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    filters_flag = getattr(args, "filters", None)
    if filters_flag is not None:
        config["filters"] = [name for name in filters_flag.split(",")
                             if name.strip()]
    return config, paths


def _require(paths: dict, key: str) -> str:
    value = paths.get(key)
    if not value:
        raise DataError(f"missing required input: --{key.replace('_', '-')}")
    if not Path(value).is_file():
        raise DataError(f"{key} file not found: {value}")
    return value


def _out_dir(paths: dict) -> Path:
    out = Path(paths["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_corpus(path: str, workers: int = 1) -> tuple[list[UserRecord], int]:
    """Deduplicated user records (latest snapshot per user) plus the count of
    lines that failed to parse. Per-line parsing is pure, so it fans out over
    workers without changing the result."""
    with open(path, "rb") as handle:
        lines = handle.readlines()

    def parse(pair):
        line_no, raw = pair
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            return ParseFailure(line_no, "invalid UTF-8")
        text = text.rstrip("\r\n")
        if not text.strip():
            return ParseFailure(line_no, "blank line")
        return parse_user_line(text, line_no)

    results = pmap_ordered(parse, list(enumerate(lines, start=1)), workers)
    records = [r for r in results if isinstance(r, UserRecord)]
    failures = len(results) - len(records)
    for failure in results:
        if isinstance(failure, ParseFailure):
            logger.debug("line %d skipped: %s", failure.line_no, failure.reason)
    ordered = list(dedupe_latest(records).values())
    logger.info("corpus: %d lines, %d parsed, %d failures, %d unique users",
                len(lines), len(records), failures, len(ordered))
    return ordered, failures


def _tag_lexicon(paths: dict):
    if paths.get("tag_lexicon"):
        return resources.load_tag_lexicon(_require(paths, "tag_lexicon"))
    return resources.load_tag_lexicon()


def _filter_resources(paths: dict):
    colors = (resources.load_colors(_require(paths, "colors_file"))
              if paths.get("colors_file") else resources.load_colors())
    blocklist = (resources.load_bigram_blocklist(_require(paths, "blocklist_file"))
                 if paths.get("blocklist_file") else resources.load_bigram_blocklist())
    return colors, blocklist


def _score_params(config: dict) -> ScoreParams:
    try:
        return ScoreParams(window=int(config["window"]),
                           threshold=float(config["threshold"]),
                           weighting=config["weighting"])
    except ValueError as exc:
        raise DataError(str(exc)) from exc


def _lexicon(paths: dict, config: dict, records, tag_lexicon) -> SelfReportLexicon:
    if paths.get("lexicon"):
        try:
            return SelfReportLexicon.from_tsv(_require(paths, "lexicon"))
        except ValueError as exc:
            raise DataError(str(exc)) from exc
    lexicon = build_selfreport_lexicon(records, tag_lexicon,
                                       allow_im=config["allow_im"])
    if not lexicon.os_counts:
        raise DataError("self-report lexicon is empty; corpus has no "
                        "first-person statements (or pass --lexicon)")
    return lexicon


def _result_base(config: dict, command: str) -> dict:
    return {"command": command, "config": config,
            "config_sha256": config_hash(config), "seed": config["seed"]}


def cmd_lexicon_build(args: argparse.Namespace) -> int:
    config, paths = _resolve(args)
    corpus_path = _require(paths, "corpus")
    tag_lexicon = _tag_lexicon(paths)
    out = _out_dir(paths)
    records, failures = _load_corpus(corpus_path, args.workers)
    lexicon = build_selfreport_lexicon(records, tag_lexicon,
                                       allow_im=config["allow_im"])
    lexicon.to_tsv(out / "selfreport_lexicon.tsv")
    summary = _result_base(config, "lexicon-build")
    summary.update({
        "n_users": len(records),
        "n_parse_failures": failures,
        "n_words": len(lexicon.os_counts),
        "total_selfreport": lexicon.total_selfreport,
    })
    write_json(out / "lexicon_summary.json", summary)
    return 0


def _filter_accounting(reports, filter_config: FilterConfig, colors, blocklist):
    """Removal table: users removed with only each enabled filter on, removals
    attributed to the chain filter that fired first under the full config,
    and the pass count. A multi-match user passes when any match passes;
    removed users attribute to the rejecting filter of their first match."""
    enabled = [name for name, flag in
               zip(FILTER_NAMES, (filter_config.color, filter_config.plural,
                                  filter_config.bigram, filter_config.quote))
               if flag]
    solo_configs = {name: FilterConfig.from_names([name]) for name in enabled}
    solo_removed = {name: 0 for name in enabled}
    chain_removed = Counter()
    passed = 0
    for report in reports:
        for name, solo in solo_configs.items():
            if not any(apply_filter_chain(report.tagged, report.raw_text, match,
                                          solo, colors, blocklist).passed
                       for match in report.matches):
                solo_removed[name] += 1
        outcomes = [apply_filter_chain(report.tagged, report.raw_text, match,
                                       filter_config, colors, blocklist)
                    for match in report.matches]
        if any(outcome.passed for outcome in outcomes):
            passed += 1
        elif outcomes:
            chain_removed[outcomes[0].rejecting_filter] += 1
    return {
        "removed_with_single_filter": solo_removed,
        "removed_by_filter_chain": dict(sorted(chain_removed.items())),
        "passed_filters": passed,
        "total_matched": len(reports),
    }


def cmd_dataset_build(args: argparse.Namespace) -> int:
    config, paths = _resolve(args)
    kind = config.get("kind")
    if kind not in ("qb", "hf", "cb"):
        raise DataError("dataset-build needs --kind qb|hf|cb")
    corpus_path = _require(paths, "corpus")
    tag_lexicon = _tag_lexicon(paths)
    colors, blocklist = _filter_resources(paths)
    try:
        filter_config = FilterConfig.from_names(config["filters"])
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    out = _out_dir(paths)
    records, _ = _load_corpus(corpus_path, args.workers)
    lexicon = _lexicon(paths, config, records, tag_lexicon)
    params = _score_params(config)

    stats = _result_base(config, "dataset-build")
    stats["kind"] = kind
    stats["n_users"] = len(records)

    if kind == "qb":
        users = build_qb(records, tag_lexicon, lexicon, params,
                         workers=args.workers)
    elif kind == "hf":
        reports = match_reports(records, tag_lexicon, lexicon, params,
                                workers=args.workers)
        stats["n_matched"] = len(reports)
        stats["filter_accounting"] = _filter_accounting(
            reports, filter_config, colors, blocklist)
        users = build_hf(records, tag_lexicon, lexicon, params, filter_config,
                         colors, blocklist, workers=args.workers)
    else:
        qb = build_qb(records, tag_lexicon, lexicon, params,
                      workers=args.workers)
        hf = build_hf(records, tag_lexicon, lexicon, params, filter_config,
                      colors, blocklist, workers=args.workers)
        candidates = merge_candidates(qb, hf)
        try:
            users = build_cb(candidates, k=config["cb_k"])
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        stats["k"] = len(users) // len(CLASS_ORDER) if users else 0

    stats["class_counts"] = {
        label.value: sum(1 for user in users if user.label == label)
        for label in CLASS_ORDER}
    stats["n_output"] = len(users)
    write_dataset_tsv(users, out / f"dataset_{kind}.tsv")
    write_json(out / f"dataset_{kind}_stats.json", stats)
    return 0


def cmd_tune(args: argparse.Namespace) -> int:
    config, paths = _resolve(args)
    corpus_path = _require(paths, "corpus")
    tuning_path = _require(paths, "tuning")
    tag_lexicon = _tag_lexicon(paths)
    out = _out_dir(paths)
    records, _ = _load_corpus(corpus_path, args.workers)
    lexicon = _lexicon(paths, config, records, tag_lexicon)

    try:
        rows = read_tuning_tsv(tuning_path)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    votes: dict[str, list[str]] = {}
    for user_id, label, _annotator in rows:
        votes.setdefault(user_id, []).append(label)
    labels: dict[str, bool] = {}
    for user_id, cast in votes.items():
        verdict = analytics.majority_vote(cast)
        if verdict is analytics.DISCARD:
            continue
        labels[user_id] = verdict == "yes"

    reports = match_reports(records, tag_lexicon, lexicon, _score_params(config),
                            workers=args.workers)
    # the first query match stands in for the user
    tuning_set = [(report.tagged, report.matches[0], labels[report.user_id])
                  for report in reports if report.user_id in labels]
    grid = [ScoreParams(window, threshold, weighting)
            for weighting in config["grid_weightings"]
            for window in config["grid_windows"]
            for threshold in config["grid_thresholds"]]
    try:
        best = tune_params(tuning_set, lexicon, grid)
    except ValueError as exc:
        raise DataError(str(exc)) from exc

    scores = [score_description(tagged, match, lexicon, best).value
              for tagged, match, _ in tuning_set]
    truth = [label for _, _, label in tuning_set]
    predicted = [score >= best.threshold for score in scores]
    tp = sum(1 for p, t in zip(predicted, truth) if p and t)
    fp = sum(1 for p, t in zip(predicted, truth) if p and not t)
    fn = sum(1 for p, t in zip(predicted, truth) if not p and t)
    result = _result_base(config, "tune")
    result.update({
        "window": best.window,
        "threshold": best.threshold,
        "weighting": best.weighting,
        "precision": tp / (tp + fp) if tp + fp else None,
        "recall": tp / (tp + fn) if tp + fn else 0.0,
        "n_examples": len(tuning_set),
        "n_discarded": len(votes) - len(labels),
    })
    write_json(out / "tune_result.json", result)
    return 0


def _dataset_with_records(dataset, records_by_id):
    pairs = []
    for user in dataset:
        record = records_by_id.get(user.user_id)
        if record is not None:
            pairs.append((user, record))
    if not pairs:
        raise DataError("no dataset user ids found in the corpus")
    return pairs


def _read_dataset(path):
    try:
        dataset = read_dataset_tsv(path)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    if not dataset:
        raise DataError(f"dataset is empty: {path}")
    return dataset


def cmd_train(args: argparse.Namespace) -> int:
    config, paths = _resolve(args)
    model_name = config["model"]
    dataset = _read_dataset(_require(paths, "train_data"))
    out = _out_dir(paths)

    result = _result_base(config, "train")
    result["model"] = model_name
    result["n_train"] = len(dataset)
    model_path = out / "model.json"

    if model_name == "baseline-majority":
        model = baseline_majority([user.label for user in dataset])
        result["majority"] = model.majority.value
        save_model(model, model_path)
        write_json(out / "train_result.json", result)
        return 0
    if model_name == "baseline-random":
        model = baseline_random(stage_seed(config["seed"], "baseline"))
        save_model(model, model_path)
        write_json(out / "train_result.json", result)
        return 0

    corpus_path = _require(paths, "corpus")
    records, _ = _load_corpus(corpus_path, args.workers)
    pairs = _dataset_with_records(dataset,
                                  {record.user_id: record for record in records})
    train_config = TrainConfig(
        learning_rate=float(config["learning_rate"]),
        epochs=int(config["epochs"]),
        l2_strength=float(config["l2_strength"]),
        instance_downweight=float(config["instance_downweight"]),
        seed=stage_seed(config["seed"], "train"),
        batch_size=int(config["batch_size"]),
    )

    try:
        if model_name == "unigram":
            if paths.get("embeddings"):
                table = read_embeddings(_require(paths, "embeddings"))
                pairs = [(user, record) for user, record in pairs
                         if user.user_id in table]
                if not pairs:
                    raise DataError("no embeddings match the training user ids")
                train_items = [(table[user.user_id], user.label, user.source)
                               for user, _ in pairs]
                result["n_features"] = len(train_items[0][0])
                model = train_unigram(train_items, train_config)
            else:
                stopwords = resources.load_stopwords()
                vocab = build_vocab([record for _, record in pairs],
                                    min_count=int(config["min_count"]),
                                    stopwords=stopwords,
                                    max_tweets=int(config["max_tweets"]))
                if not vocab:
                    raise DataError("empty vocabulary; not enough tweet text")
                train_items = [
                    (featurize_user(record, vocab, int(config["max_tweets"])),
                     user.label, user.source)
                    for user, record in pairs]
                result["vocab_size"] = len(vocab)
                model = train_unigram(train_items, train_config, vocab=vocab,
                                      stopwords=stopwords)
        elif model_name == "namecnn":
            train_items = [
                (record.name, name_meta_features(record), user.label, user.source)
                for user, record in pairs]
            model = train_name_cnn(train_items, train_config,
                                   min_char_count=int(config["min_char_count"]))
            result["char_vocab_size"] = len(model.char_vocab)
        else:
            raise DataError(f"unknown model {model_name!r}")
    except ValueError as exc:
        raise DataError(str(exc)) from exc

    labels = [user.label for user, _ in pairs]
    sources = [user.source for user, _ in pairs]
    class_weights = inverse_class_weights(labels)
    weights = example_weights(labels, sources, class_weights,
                              train_config.instance_downweight)
    result["n_usable"] = len(pairs)
    result["class_weights"] = class_weights.tolist()
    result["effective_weight_histogram"] = effective_weight_histogram(weights)
    save_model(model, model_path)
    write_json(out / "train_result.json", result)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config, paths = _resolve(args)
    model_path = _require(paths, "model_file")
    try:
        model = load_model(model_path)
    except (ValueError, json.JSONDecodeError) as exc:
        raise DataError(f"bad model file: {exc}") from exc
    dataset = _read_dataset(_require(paths, "test_data"))
    out = _out_dir(paths)

    kind = type(model).__name__
    if kind in ("RandomBaseline", "MajorityBaseline"):
        test_set = [(None, user.label) for user in dataset]
    else:
        corpus_path = _require(paths, "corpus")
        records, _ = _load_corpus(corpus_path, args.workers)
        pairs = _dataset_with_records(
            dataset, {record.user_id: record for record in records})
        if kind == "NameModel":
            test_set = [((record.name, name_meta_features(record)), user.label)
                        for user, record in pairs]
        elif paths.get("embeddings"):
            table = read_embeddings(_require(paths, "embeddings"))
            test_set = [(table[user.user_id], user.label)
                        for user, _ in pairs if user.user_id in table]
            if not test_set:
                raise DataError("no embeddings match the test user ids")
        else:
            if isinstance(model, UnigramModel) and not model.vocab:
                raise DataError("model was trained on embedding features; "
                                "pass --embeddings")
            test_set = [
                (featurize_user(record, model.vocab, int(config["max_tweets"])),
                 user.label)
                for user, record in pairs]

    try:
        report = evaluate(model, test_set, setting=config["setting"],
                          seed=stage_seed(config["seed"], "evaluate"))
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    result = _result_base(config, "evaluate")
    result.update(report.to_dict())
    write_json(out / "eval_result.json", result)
    table = format_report_table([(kind, report)])
    (out / "eval_report.txt").write_text(table + "\n", encoding="utf-8")
    return 0


def _pair_key(a, b) -> str:
    return f"{a.value}|{b.value}"


def cmd_analyze(args: argparse.Namespace) -> int:
    config, paths = _resolve(args)
    corpus_path = _require(paths, "corpus")
    data_path = _require(paths, "data")
    out = _out_dir(paths)
    records, _ = _load_corpus(corpus_path, args.workers)
    dataset = _read_dataset(data_path)
    pairs = _dataset_with_records(dataset,
                                  {record.user_id: record for record in records})
    groups: dict = {}
    for user, record in pairs:
        groups.setdefault(user.label, []).append(record)
    present = [label for label in CLASS_ORDER if label in groups]
    stopwords = resources.load_stopwords()
    max_tweets = int(config["max_tweets"])

    lexical = analytics.group_lexical_stats(groups, stopwords, max_tweets)
    samples = {
        label: [stats for stats in
                (analytics.user_lexical_means(record, stopwords, max_tweets)
                 for record in groups[label])
                if stats is not None]
        for label in present}
    mwu: dict = {}
    for metric in ("ttr", "ld", "cpt", "hpt"):
        table = {}
        for i, a in enumerate(present):
            for b in present[i + 1:]:
                sample_a = [stats[metric] for stats in samples[a]]
                sample_b = [stats[metric] for stats in samples[b]]
                try:
                    u, p = analytics.mann_whitney_u(sample_a, sample_b)
                    table[_pair_key(a, b)] = {"U": u, "p": p}
                except ValueError:
                    # degenerate sample (empty or every value tied)
                    table[_pair_key(a, b)] = None
        mwu[metric] = table

    behavior = analytics.behavioral_profile(groups, max_tweets)
    counts = {label: analytics.group_token_counts(groups[label], max_tweets)
              for label in present}
    background: Counter = Counter()
    for counter in counts.values():
        background.update(counter)
    tau_ks = [int(k) for k in config["tau_ks"]]
    top_n = int(config["top_n"])
    list_len = max([top_n] + tau_ks)
    try:
        keywords = {
            label: analytics.distinctive_keywords(
                counts[label], background, lam=float(config["sage_lambda"]),
                top_n=list_len)
            for label in present}
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    tau: dict = {}
    for k in tau_ks:
        table = {}
        for i, a in enumerate(present):
            for b in present[i + 1:]:
                list_a = keywords[a][:k]
                list_b = keywords[b][:k]
                if not list_a or not list_b:
                    table[_pair_key(a, b)] = None
                    continue
                try:
                    table[_pair_key(a, b)] = analytics.kendall_tau_top_k(
                        list_a, list_b, k)
                except ValueError:
                    table[_pair_key(a, b)] = None
        tau[f"k={k}"] = table

    result = _result_base(config, "analyze")
    result.update({
        "groups": {label.value: len(groups[label]) for label in present},
        "lexical": {
            label.value: {
                "lexical_diversity": lexical[label].lexical_diversity,
                "contractions_per_tweet": lexical[label].contractions_per_tweet,
                "type_token_ratio": lexical[label].type_token_ratio,
                "hashtags_per_tweet": lexical[label].hashtags_per_tweet,
            } for label in present},
        "mann_whitney": mwu,
        "behavior": {
            label.value: {
                "pct_android": behavior[label].pct_android,
                "pct_iphone": behavior[label].pct_iphone,
                "pct_desktop": behavior[label].pct_desktop,
                "pct_profile_url": behavior[label].pct_profile_url,
                "pct_custom_image": behavior[label].pct_custom_image,
                "pct_geo_enabled": behavior[label].pct_geo_enabled,
                "pct_geotagged": behavior[label].pct_geotagged,
                "avg_statuses": behavior[label].avg_statuses,
                "avg_tweets_per_month": behavior[label].avg_tweets_per_month,
                "pct_tweets_mention": behavior[label].pct_tweets_mention,
                "pct_tweets_image": behavior[label].pct_tweets_image,
                "pct_tweets_url": behavior[label].pct_tweets_url,
            } for label in present},
        "distinctive_keywords": {label.value: keywords[label][:top_n]
                                 for label in present},
        "kendall_tau": tau,
    })
    write_json(out / "analyze_result.json", result)
    return 0


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"identminer: data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"identminer: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
