"""Acceptance suite: one test per release criterion.

Each test prints a PASS/FAIL line (visible with pytest -s or in captured
output) and enforces the criterion's runtime budget. The final test is
an optional full-corpus band check that only runs when FIBVID_DATA_DIR
points at user-supplied data.
"""

import json
import os
import time

import numpy as np
import pytest

from newsdiffusion.cli import main
from newsdiffusion.datagen import (
    linear_regression_dataset,
    planted_corpus,
    two_gaussian_dataset,
)
from newsdiffusion.metrics import ConfusionMatrix, classification_metrics, roc_auroc
from newsdiffusion.ml import (
    GBDTRegressor,
    LinearSVMClassifier,
    RandomForestClassifier,
    logistic_loss_grad,
)
from newsdiffusion.ml.tree import grow_tree
from newsdiffusion.social import tff
from newsdiffusion.topics import TwitterLda

from oracles import brute_force_gini_split, finite_difference_gradient, pairwise_auroc
from test_metrics import METRIC_CASES


def _report(name: str, ok: bool, elapsed: float, budget: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"{status}: {name} ({elapsed:.2f}s / budget {budget:.0f}s)")


def test_criterion_1_metric_oracles():
    budget = 5.0
    start = time.perf_counter()
    ok = True
    for counts, expected in METRIC_CASES:
        got = classification_metrics(ConfusionMatrix(*counts))
        ok &= (got["accuracy"], got["precision"], got["recall"], got["f1"]) == expected
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(4, 60))
        y = rng.integers(0, 2, size=n)
        y[0], y[1] = 0, 1
        scores = np.round(rng.random(n), 2)
        ok &= abs(roc_auroc(y, scores).auroc - pairwise_auroc(y, scores)) < 1e-12
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report("criterion 1: metric oracle suite", ok, elapsed, budget)
    assert ok


def test_criterion_2_follower_ratio():
    budget = 1.0
    start = time.perf_counter()
    ok = tff(0, 0) == 1.0 and tff(99, 49) == 2.0 and tff(0, 999) == 0.001
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        followers, following = (int(v) for v in rng.integers(0, 100_000, size=2))
        ok &= tff(followers + 1, following) > tff(followers, following)
        ok &= tff(followers, following + 1) < tff(followers, following)
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report("criterion 2: follower-following ratio suite", ok, elapsed, budget)
    assert ok


def test_criterion_3_tree_split_oracle():
    budget = 30.0
    start = time.perf_counter()
    ok = True
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(4, 51))
        d = int(rng.integers(1, 5))
        X = np.round(rng.normal(size=(n, d)), 2)
        y = rng.integers(0, 2, size=n)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        expected = brute_force_gini_split(X, y)
        node = grow_tree(X, y, np.arange(n), criterion="gini", max_depth=1, min_samples_split=2)
        if expected is None:
            ok &= node.is_leaf
        else:
            ok &= (not node.is_leaf) and node.feature == expected[1] and node.threshold == expected[2]
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report("criterion 3: CART split equals brute force", ok, elapsed, budget)
    assert ok


def test_criterion_4_gradient_check():
    budget = 10.0
    start = time.perf_counter()
    ok = True
    rng = np.random.default_rng(99)
    for _ in range(100):
        n = int(rng.integers(3, 40))
        d = int(rng.integers(1, 8))
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n).astype(float)
        w = rng.normal(scale=0.8, size=d)
        b = float(rng.normal())
        l2 = float(rng.uniform(0, 1.0))
        _, grad_w, grad_b = logistic_loss_grad(w, b, X, y, l2)
        fd_w, fd_b = finite_difference_gradient(
            lambda wv, bv: logistic_loss_grad(wv, bv, X, y, l2)[0], w, b
        )
        analytic = np.append(grad_w, grad_b)
        numeric = np.append(fd_w, fd_b)
        rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), 1e-12)
        ok &= rel < 1e-5
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report("criterion 4: logistic gradient vs finite differences", ok, elapsed, budget)
    assert ok


def test_criterion_5_learner_sanity():
    budget = 60.0
    start = time.perf_counter()
    X, y = two_gaussian_dataset(n=700, seed=42)
    forest = RandomForestClassifier(n_trees=25, seed=42).fit(X[:500], y[:500])
    forest_acc = float((forest.predict(X[500:]) == y[500:]).mean())

    Xr, yr = linear_regression_dataset(n=200, slope=3.0, noise=0.1, seed=0)
    gbdt = GBDTRegressor(n_estimators=100, learning_rate=0.1).fit(Xr[:150], yr[:150])
    residual = yr[150:] - gbdt.predict(Xr[150:])
    ss_tot = float(np.sum((yr[150:] - yr[150:].mean()) ** 2))
    gbdt_r2 = 1.0 - float(np.sum(residual**2)) / ss_tot

    svm = LinearSVMClassifier(n_epochs=30, seed=42).fit(X[:500], y[:500])
    svm_acc = float((svm.predict(X[500:]) == y[500:]).mean())

    ok = forest_acc >= 0.95 and gbdt_r2 >= 0.9 and svm_acc >= 0.9
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report(
        f"criterion 5: learner sanity (rf {forest_acc:.3f}, gbdt r2 {gbdt_r2:.3f}, svm {svm_acc:.3f})",
        ok,
        elapsed,
        budget,
    )
    assert ok


def test_criterion_6_topic_model_suite():
    budget = 90.0
    start = time.perf_counter()
    texts, authors, groups = planted_corpus(
        n_users=200, tweets_per_user=10, words_per_tweet=8, vocab_size=50, seed=11
    )
    model = TwitterLda(n_topics=2, n_sweeps=200, min_count=1, stopwords=(), seed=7)
    model.fit(texts, authors)
    simplex_ok = (
        bool(np.all(np.abs(model.theta_.sum(axis=1) - 1.0) < 1e-9))
        and bool(np.all(np.abs(model.phi_.sum(axis=1) - 1.0) < 1e-9))
        and abs(model.phi_background_.sum() - 1.0) < 1e-9
    )
    argmax = model.theta_.argmax(axis=1)
    purity = max(float((argmax == groups).mean()), float((argmax == 1 - groups).mean()))

    held_texts, held_authors, held_groups = planted_corpus(
        n_users=40, tweets_per_user=5, words_per_tweet=8, vocab_size=50, seed=99
    )
    predicted = model.transform(held_texts).argmax(axis=1)
    truth = np.array([held_groups[int(a[1:])] for a in held_authors])
    inference_purity = max(float((predicted == truth).mean()), float((predicted == 1 - truth).mean()))

    small_texts, small_authors, _ = planted_corpus(n_users=20, tweets_per_user=5, seed=3)
    refit_a = TwitterLda(n_topics=3, n_sweeps=25, min_count=1, stopwords=(), seed=5).fit(
        small_texts, small_authors
    )
    refit_b = TwitterLda(n_topics=3, n_sweeps=25, min_count=1, stopwords=(), seed=5).fit(
        small_texts, small_authors
    )
    refit_ok = (
        np.array_equal(refit_a.theta_, refit_b.theta_)
        and np.array_equal(refit_a.phi_, refit_b.phi_)
        and np.array_equal(refit_a.phi_background_, refit_b.phi_background_)
    )
    small_simplex_ok = bool(np.all(np.abs(refit_a.theta_.sum(axis=1) - 1.0) < 1e-9)) and bool(
        np.all(np.abs(refit_a.phi_.sum(axis=1) - 1.0) < 1e-9)
    )

    ok = simplex_ok and small_simplex_ok and purity >= 0.9 and inference_purity >= 0.9 and refit_ok
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report(
        f"criterion 6: topic model suite (purity {purity:.3f}, held-out {inference_purity:.3f})",
        ok,
        elapsed,
        budget,
    )
    assert ok


def test_criterion_7_end_to_end(tmp_path):
    budget = 120.0
    start = time.perf_counter()
    out = tmp_path / "run"
    exit_code = main(["all", "--sample", "--out-dir", str(out)])
    ok = exit_code == 0
    if ok:
        payload = json.loads((out / "metrics.json").read_text())
        ok &= len(payload["classifiers"]) >= 5
        ok &= len(payload["regressors"]) >= 2
        report = json.loads((out / "label_report.json").read_text())
        ok &= 0.40 <= report["positive_rate"] <= 0.50
        curves = list(out.glob("roc_*.csv"))
        ok &= len(curves) >= 5
        for roc in curves:
            rows = [
                line.split(",")
                for line in roc.read_text().splitlines()
                if line and not line.startswith(("#", "fpr"))
            ]
            fpr = [float(r[0]) for r in rows]
            tpr = [float(r[1]) for r in rows]
            ok &= fpr[0] == 0.0 and tpr[0] == 0.0 and fpr[-1] == 1.0 and tpr[-1] == 1.0
            ok &= all(a <= b for a, b in zip(fpr, fpr[1:]))
            ok &= all(a <= b for a, b in zip(tpr, tpr[1:]))
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    _report("criterion 7: end-to-end pipeline on bundled sample", ok, elapsed, budget)
    assert ok


@pytest.mark.skipif(
    "FIBVID_DATA_DIR" not in os.environ,
    reason="optional band check; set FIBVID_DATA_DIR to the full corpus directory",
)
def test_criterion_8_full_corpus_band(tmp_path):
    """Best-effort check against the published headline numbers; the exact
    labeling thresholds and hyperparameters behind them are unpublished."""
    from newsdiffusion.config import PipelineConfig
    from newsdiffusion.pipeline import run_all

    base = os.environ["FIBVID_DATA_DIR"]
    config = PipelineConfig.from_dict(
        {
            "claims_path": os.path.join(base, "claims.csv"),
            "propagation_path": os.path.join(base, "propagation.csv"),
            "users_path": os.path.join(base, "users.csv"),
            "mapping": "fibvid",
            "seed": 42,
            "out_dir": str(tmp_path / "fibvid_run"),
        }
    )
    results = run_all(config)
    rf_accuracy = 100.0 * results["evaluate"]["classifiers"]["random_forest"]["accuracy"]
    best_r2 = max(entry["r2"] for entry in results["evaluate"]["regressors"].values())
    ok = abs(rf_accuracy - 92.05) <= 5.0 and abs(best_r2 - 0.86) <= 0.1
    _report(
        f"criterion 8: full-corpus band (rf acc {rf_accuracy:.2f}%, best r2 {best_r2:.2f})",
        ok,
        0.0,
        float("inf"),
    )
    assert ok
