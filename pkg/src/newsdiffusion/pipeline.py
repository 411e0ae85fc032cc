"""Pipeline stages behind the CLI: ingest, features, topics, label, train,
evaluate, and spread prediction.

Each stage reads its upstream artifacts from the output directory and
writes its own, so running stages one by one is byte-identical to
running them all in one go. Every artifact carries the configuration
hash and seed as a stamp (a '#' first line in CSV/JSON-lines files, or
envelope keys in JSON documents).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from . import corpus, metrics, social, textfeat
from .config import PipelineConfig, resolve_path
from .ml import (
    CLASSIFIER_KINDS,
    MODEL_KINDS,
    REGRESSOR_KINDS,
    load_model,
    model_to_dict,
    split_indices,
)
from .topics import TwitterLda


class DataError(Exception):
    """Input data or upstream artifacts cannot support the requested stage."""


class MissingArtifact(DataError):
    """A stage was run before the stage that produces its input."""


# ----------------------------------------------------------------------
# artifact helpers

def _stamp(config: PipelineConfig) -> str:
    return f"# config_sha256={config.sha256} seed={config.seed}"


def _write_json(path: Path, payload: dict, config: PipelineConfig) -> None:
    document = {"config_sha256": config.sha256, "seed": config.seed, **payload}
    path.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_csv(path: Path, header: Sequence[str], rows, config: PipelineConfig) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    writer.writerows(rows)
    path.write_text(_stamp(config) + "\n" + buffer.getvalue(), encoding="utf-8")


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.exists():
        raise MissingArtifact(f"missing artifact {path.name}; run the producing stage first")
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [row for row in reader]


def _dump_records(path: Path, records, config: PipelineConfig) -> None:
    with path.open("w", encoding="utf-8") as out:
        out.write(_stamp(config) + "\n")
        for record in records:
            out.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def _segment_mappings(config: PipelineConfig) -> dict[str, corpus.SegmentMapping | None]:
    spec = config["mapping"]
    if spec is None:
        return {"claims": None, "propagation": None, "users": None}
    if spec == "fibvid":
        return corpus.fibvid_mapping()
    if isinstance(spec, dict):
        return {
            name: corpus.SegmentMapping(**section) if section else None
            for name, section in spec.items()
        }
    raise DataError(f"unsupported mapping spec: {spec!r}")


def _text_config(config: PipelineConfig) -> textfeat.TextConfig:
    lexicon_path = config["lexicon_path"]
    lexicon = textfeat.load_lexicon(resolve_path(lexicon_path) if lexicon_path else None)
    text = config["text"]
    return textfeat.TextConfig(
        simple_max=text["simple_max"],
        medium_max=text["medium_max"],
        positive_min=text["positive_min"],
        negative_max=text["negative_max"],
        stylic_min_personal=text["stylic_min_personal"],
        negators=tuple(text["negators"]) if text["negators"] else textfeat.DEFAULT_NEGATORS,
        personal_pronouns=(
            tuple(text["personal_pronouns"])
            if text["personal_pronouns"]
            else textfeat.DEFAULT_PERSONAL_PRONOUNS
        ),
        impersonal_pronouns=(
            tuple(text["impersonal_pronouns"])
            if text["impersonal_pronouns"]
            else textfeat.DEFAULT_IMPERSONAL_PRONOUNS
        ),
        lexicon=lexicon,
    )


def _load_dumped(config: PipelineConfig, name: str) -> list:
    path = config.out_dir / f"{name}.jsonl"
    if not path.exists():
        raise MissingArtifact(f"missing artifact {path.name}; run 'ingest' first")
    loader = {
        "claims": corpus.load_claims,
        "propagation": corpus.load_propagation,
        "users": corpus.load_users,
    }[name]
    return loader(path).records


# ----------------------------------------------------------------------
# stages

def run_ingest(config: PipelineConfig) -> dict:
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    mappings = _segment_mappings(config)
    claims = corpus.load_claims(config.path("claims_path"), mappings.get("claims"))
    known = {c.claim_id for c in claims.records}
    tweets = corpus.load_propagation(config.path("propagation_path"), mappings.get("propagation"), known_claims=known)
    users = corpus.load_users(config.path("users_path"), mappings.get("users"))

    _dump_records(out / "claims.jsonl", claims.records, config)
    _dump_records(out / "propagation.jsonl", tweets.records, config)
    _dump_records(out / "users.jsonl", users.records, config)
    report = {
        "claims": claims.report.to_dict(),
        "propagation": tweets.report.to_dict(),
        "users": users.report.to_dict(),
    }
    _write_json(out / "ingest_report.json", {"files": report}, config)

    summary = corpus.dataset_summary(claims.records, tweets.records, users.records)
    _write_json(out / "corpus_summary.json", {"summary": summary.to_dict()}, config)

    claim_cell = {c.claim_id: corpus.cell_key(c.category, c.truth_label) for c in claims.records}
    per_cell: dict[str, list[int]] = {cell: [] for cell in corpus.ALL_CELLS}
    for tweet in tweets.records:
        per_cell[claim_cell[tweet.claim_id]].append(tweet.retweet_count)
    _write_csv(
        out / "avg_retweets_by_category.csv",
        ("cell", "avg_retweet_count", "n_tweets"),
        [
            (cell, repr(float(np.mean(values))) if values else "0.0", len(values))
            for cell, values in per_cell.items()
        ],
        config,
    )
    return {"report": report, "summary": summary.to_dict()}


def run_features(config: PipelineConfig) -> dict:
    out = config.out_dir
    tweets = _load_dumped(config, "propagation")
    users = {u.user_id: u for u in _load_dumped(config, "users")}
    text_config = _text_config(config)

    header = ["tweet_id"] + social.feature_names(0)
    rows = []
    dropped = 0
    for tweet in tweets:
        author = users.get(tweet.user_id)
        if author is None:
            dropped += 1
            continue
        comp, psych, sty = textfeat.extract_features(tweet.text, text_config)
        feats = social.SocialFeatures.from_counts(
            author.follower_count, author.following_count, tweet.like_count, tweet.retweet_count
        )
        vector = social.merge_features(comp, psych, sty, feats, np.empty(0), np.empty(0))
        rows.append([tweet.tweet_id] + [repr(float(v)) for v in vector])
    _write_csv(out / "text_features.csv", header, rows, config)
    _write_json(
        out / "features_report.json",
        {"rows": len(rows), "dropped_missing_profile": dropped},
        config,
    )
    return {"rows": len(rows), "dropped_missing_profile": dropped}


def run_topics(config: PipelineConfig) -> dict:
    out = config.out_dir
    tweets = _load_dumped(config, "propagation")
    if not tweets:
        raise DataError("no tweets available for topic modeling")
    tlda_cfg = config["tlda"]
    model = TwitterLda(
        n_topics=tlda_cfg["n_topics"],
        alpha=tlda_cfg["alpha"],
        beta=tlda_cfg["beta"],
        gamma=tlda_cfg["gamma"],
        n_sweeps=tlda_cfg["n_sweeps"],
        min_count=tlda_cfg["min_count"],
        seed=config.seed,
    )
    model.fit([t.text for t in tweets], [t.user_id for t in tweets])
    payload = model.to_json()
    document = {"config_sha256": config.sha256, "seed": config.seed, **payload}
    (out / "tlda_model.json").write_text(json.dumps(document), encoding="utf-8")
    return {"n_topics": model.n_topics, "n_users": len(model.users_), "vocabulary": len(model.vocabulary_)}


def _load_tlda(config: PipelineConfig) -> TwitterLda:
    path = config.out_dir / "tlda_model.json"
    if not path.exists():
        raise MissingArtifact("missing artifact tlda_model.json; run 'topics' first")
    return TwitterLda.from_json(json.loads(path.read_text(encoding="utf-8")))


def run_label(config: PipelineConfig) -> dict:
    out = config.out_dir
    tweets = _load_dumped(config, "propagation")
    labeling = config["labeling"]
    edges = None
    if labeling["mode"] == "follower_evidence":
        edges = _read_edges(resolve_path(labeling["edges_path"])) if labeling["edges_path"] else None
    try:
        result = social.label_shared(tweets, mode=labeling["mode"], tau=labeling["tau"], edges=edges)
    except social.LabelingError as exc:
        raise DataError(str(exc)) from exc
    _write_csv(
        out / "labels.csv",
        ("tweet_id", "label"),
        [(t.tweet_id, int(label)) for t, label in zip(tweets, result.labels)],
        config,
    )
    report = {
        "mode": result.mode,
        "tau": result.tau,
        "positive_rate": result.positive_rate,
        "class_balance": {
            "shared": int(result.labels.sum()),
            "not_shared": int(len(result.labels) - result.labels.sum()),
        },
    }
    _write_json(out / "label_report.json", report, config)
    return report


def _read_edges(path: Path) -> list[tuple[str, str]]:
    header, rows = _read_csv(path)
    if header[:2] != ["follower_id", "followee_id"]:
        raise DataError(f"edge file must have header follower_id,followee_id, got {header}")
    return [(row[0], row[1]) for row in rows]


def _assemble_design(config: PipelineConfig) -> dict:
    """Join text/social features, topic features, labels, and targets."""
    feat_header, feat_rows = _read_csv(config.out_dir / "text_features.csv")
    labels_path = config.out_dir / "labels.csv"
    if not labels_path.exists():
        raise MissingArtifact("missing artifact labels.csv; run 'label' first")
    _, label_rows = _read_csv(labels_path)
    labels = {row[0]: int(row[1]) for row in label_rows}
    model = _load_tlda(config)
    tweets = {t.tweet_id: t for t in _load_dumped(config, "propagation")}

    n_topics = model.phi_.shape[0]
    names = social.feature_names(n_topics)
    X_rows: list[list[float]] = []
    y_label: list[int] = []
    y_retweets: list[float] = []
    tweet_ids: list[str] = []
    for row in feat_rows:
        tweet_id = row[0]
        tweet = tweets.get(tweet_id)
        if tweet is None or tweet_id not in labels:
            continue
        base = [float(v) for v in row[1:]]
        theta = model.user_topic_distribution(tweet.user_id)
        posterior = model.infer_tweet_topic(tweet.text)
        X_rows.append(base + theta.tolist() + posterior.tolist())
        y_label.append(labels[tweet_id])
        y_retweets.append(float(tweet.retweet_count))
        tweet_ids.append(tweet_id)
    if not X_rows:
        raise DataError("no joined instances; check upstream artifacts")
    return {
        "names": names,
        "X": np.array(X_rows, dtype=np.float64),
        "y_label": np.array(y_label, dtype=np.int64),
        "y_retweets": np.array(y_retweets, dtype=np.float64),
        "tweet_ids": tweet_ids,
    }


def _save_model_artifact(model, path: Path, config: PipelineConfig) -> None:
    # stamp the model document; the loader ignores the extra envelope keys
    document = {"config_sha256": config.sha256, "seed": config.seed, **model_to_dict(model)}
    path.write_text(json.dumps(document), encoding="utf-8")


def _instantiate(kind: str, params: dict, seed: int):
    cls = MODEL_KINDS.get(kind)
    if cls is None:
        raise DataError(f"unknown model kind {kind!r} in config roster")
    params = dict(params)
    if "seed" in cls().get_params() and "seed" not in params:
        params["seed"] = seed
    return cls(**params)


def run_train(config: PipelineConfig) -> dict:
    out = config.out_dir
    design = _assemble_design(config)
    X, names = design["X"], design["names"]
    tweet_ids = design["tweet_ids"]

    _write_csv(
        out / "dataset_classification.csv",
        names + ["label"],
        [[repr(v) for v in row] + [int(label)] for row, label in zip(X.tolist(), design["y_label"])],
        config,
    )
    _write_csv(
        out / "dataset_regression.csv",
        names + ["target"],
        [[repr(v) for v in row] + [repr(float(t))] for row, t in zip(X.tolist(), design["y_retweets"])],
        config,
    )

    split_cfg = config["split"]
    cls_train, cls_test = split_indices(
        design["y_label"],
        test_fraction=split_cfg["test_fraction"],
        stratified=split_cfg["stratified"],
        seed=config.seed,
    )
    reg_train, reg_test = split_indices(
        design["y_retweets"],
        test_fraction=split_cfg["test_fraction"],
        stratified=False,
        seed=config.seed,
    )
    _write_json(
        out / "split.json",
        {
            "classification": {
                "train": [tweet_ids[i] for i in cls_train],
                "test": [tweet_ids[i] for i in cls_test],
            },
            "regression": {
                "train": [tweet_ids[i] for i in reg_train],
                "test": [tweet_ids[i] for i in reg_test],
            },
        },
        config,
    )

    models_dir = out / "models"
    models_dir.mkdir(exist_ok=True)
    trained = []
    roster = config["models"]
    for kind in sorted(roster["classifiers"]):
        model = _instantiate(kind, roster["classifiers"][kind], config.seed)
        model.fit(X[cls_train], design["y_label"][cls_train])
        _save_model_artifact(model, models_dir / f"{kind}.json", config)
        trained.append(kind)
    for kind in sorted(roster["regressors"]):
        model = _instantiate(kind, roster["regressors"][kind], config.seed)
        model.fit(X[reg_train], design["y_retweets"][reg_train])
        _save_model_artifact(model, models_dir / f"{kind}.json", config)
        trained.append(kind)
    _write_json(out / "train_report.json", {"models": trained, "n_instances": len(tweet_ids)}, config)
    return {"models": trained, "n_instances": len(tweet_ids)}


def _load_split(config: PipelineConfig) -> dict:
    path = config.out_dir / "split.json"
    if not path.exists():
        raise MissingArtifact("missing artifact split.json; run 'train' first")
    return json.loads(path.read_text(encoding="utf-8"))


def _read_dataset(config: PipelineConfig, name: str, target_column: str):
    header, rows = _read_csv(config.out_dir / name)
    if header[-1] != target_column:
        raise DataError(f"{name}: expected last column {target_column!r}")
    X = np.array([[float(v) for v in row[:-1]] for row in rows], dtype=np.float64)
    y = np.array([float(row[-1]) for row in rows], dtype=np.float64)
    return X, y


def run_evaluate(config: PipelineConfig) -> dict:
    out = config.out_dir
    models_dir = out / "models"
    if not models_dir.exists() or not any(models_dir.glob("*.json")):
        raise MissingArtifact("no trained models found; run 'train' first")
    split = _load_split(config)
    X_cls, y_cls = _read_dataset(config, "dataset_classification.csv", "label")
    X_reg, y_reg = _read_dataset(config, "dataset_regression.csv", "target")

    # dataset rows follow text_features.csv order; rebuild id -> row index
    ordered_ids = _dataset_tweet_order(config)
    id_to_row = {tid: i for i, tid in enumerate(ordered_ids)}

    cls_test = np.array([id_to_row[tid] for tid in split["classification"]["test"]], dtype=np.int64)
    reg_test = np.array([id_to_row[tid] for tid in split["regression"]["test"]], dtype=np.int64)

    classifiers: dict[str, dict] = {}
    confusions: dict[str, dict] = {}
    regressors: dict[str, dict] = {}
    for path in sorted(models_dir.glob("*.json")):
        model = load_model(path)
        kind = path.stem
        if kind in CLASSIFIER_KINDS:
            scores = model.predict_proba(X_cls[cls_test])
            predictions = model.predict(X_cls[cls_test])
            cm = metrics.confusion(y_cls[cls_test], predictions)
            entry = metrics.classification_metrics(cm)
            curve = metrics.roc_auroc(y_cls[cls_test], scores)
            entry["auroc"] = curve.auroc
            classifiers[kind] = entry
            confusions[kind] = cm.to_dict()
            _write_csv(
                out / f"roc_{kind}.csv",
                ("fpr", "tpr", "threshold"),
                [(repr(p.fpr), repr(p.tpr), repr(p.threshold)) for p in curve.points],
                config,
            )
        elif kind in REGRESSOR_KINDS:
            predictions = model.predict(X_reg[reg_test])
            regressors[kind] = metrics.regression_metrics(y_reg[reg_test], predictions)
    payload = {
        "positive_label": "1 (shared)",
        "classifiers": classifiers,
        "regressors": regressors,
        "confusion_matrices": confusions,
    }
    _write_json(out / "metrics.json", payload, config)
    return payload


def _dataset_tweet_order(config: PipelineConfig) -> list[str]:
    feat_header, feat_rows = _read_csv(config.out_dir / "text_features.csv")
    labels_path = config.out_dir / "labels.csv"
    _, label_rows = _read_csv(labels_path)
    labeled = {row[0] for row in label_rows}
    return [row[0] for row in feat_rows if row[0] in labeled]


def run_predict_spread(
    config: PipelineConfig,
    tweet_text: str,
    sender_id: str,
    recipient_ids: Sequence[str],
    model_name: str | None = None,
) -> dict:
    out = config.out_dir
    users = {u.user_id: u for u in _load_dumped(config, "users")}
    sender = users.get(sender_id)
    if sender is None:
        raise DataError(f"unknown sender {sender_id!r}")
    missing = [r for r in recipient_ids if r not in users]
    if missing:
        raise DataError(f"unknown recipient(s): {missing}")
    kind = model_name or config["spread"]["model"]
    model_path = out / "models" / f"{kind}.json"
    if not model_path.exists():
        raise MissingArtifact(f"no trained model {kind!r} found; run 'train' first")
    model = load_model(model_path)
    estimate = social.predict_spread(
        model,
        sender,
        tweet_text,
        [users[r] for r in recipient_ids],
        topic_model=_load_tlda(config),
        text_config=_text_config(config),
        like_count=config["spread"]["like_count"],
    )
    payload = {"model": kind, "sender": sender_id, **estimate.to_dict()}
    _write_json(out / "spread_estimate.json", payload, config)
    return payload


def run_all(config: PipelineConfig) -> dict:
    results = {
        "ingest": run_ingest(config),
        "features": run_features(config),
        "topics": run_topics(config),
        "label": run_label(config),
        "train": run_train(config),
        "evaluate": run_evaluate(config),
    }
    return results
