"""Per-user topic modeling with a collapsed-Gibbs Twitter-style LDA.

Each tweet carries exactly one topic drawn from its author's topic
distribution; each word carries a Bernoulli switch choosing between a
shared background word distribution and the tweet topic's distribution.
The sampler is strictly sequential and fully seeded: identical inputs,
hyperparameters, and seed reproduce the fitted model bit for bit.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .textfeat import tokenize

DEFAULT_STOPWORDS = frozenset("""
a about after all also am an and any are as at be because been but by can
could did do does for from had has have he her here him his how i if in into
is it its just like me more most my no not of on or our out she so some than
that the their them then there these they this to up us was we were what when
which who will with would you your
""".split())


@dataclass(frozen=True)
class Vocabulary:
    """Dense word-index bijection over the modeled vocabulary."""

    words: tuple[str, ...]
    index: dict[str, int]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def ids(self, tokens: Iterable[str]) -> np.ndarray:
        """Map tokens to word ids, dropping out-of-vocabulary tokens."""
        return np.array([self.index[t] for t in tokens if t in self.index], dtype=np.int64)


def build_vocabulary(
    texts: Sequence[str],
    min_count: int = 1,
    stopwords: Iterable[str] = (),
) -> Vocabulary:
    """Vocabulary of tokens with corpus frequency >= min_count, minus stopwords."""
    stop = set(stopwords)
    counts: Counter[str] = Counter()
    for text in texts:
        _, words = tokenize(text)
        counts.update(words)
    kept = sorted(w for w, c in counts.items() if c >= min_count and w not in stop)
    return Vocabulary(words=tuple(kept), index={w: i for i, w in enumerate(kept)})


def _occurrence_indices(ids: list[int]) -> tuple[list[int], list[int]]:
    # j-th repeat of a word contributes factor (count + beta + j); tweets
    # are short, so a dict loop beats a vectorized unique here
    seen: dict[int, int] = {}
    repeats = []
    for w in ids:
        j = seen.get(w, 0)
        seen[w] = j + 1
        repeats.append(j)
    return ids, repeats


class TwitterLda(BaseEstimator):
    """Collapsed-Gibbs sampler for tweet-level topics with a background switch.

    Parameters
    ----------
    n_topics : number of topics T (>= 1).
    alpha : Dirichlet prior on user topic distributions; None means 50/T.
    beta : Dirichlet prior on word distributions.
    gamma : Beta prior (symmetric) on the background/topic switch.
    n_sweeps : Gibbs sweeps; 0 keeps the seeded initialization counts.
    min_count, stopwords : vocabulary construction, used when no
        prebuilt vocabulary is passed to :meth:`fit`.
    seed : master seed; same seed gives a bit-identical model.
    check_counts : recount all tables from assignments after each sweep
        (debug aid, slow).
    """

    def __init__(
        self,
        n_topics: int = 10,
        alpha: float | None = None,
        beta: float = 0.01,
        gamma: float = 20.0,
        n_sweeps: int = 500,
        min_count: int = 5,
        stopwords: tuple[str, ...] = tuple(sorted(DEFAULT_STOPWORDS)),
        seed: int = 0,
        check_counts: bool = False,
    ):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.n_sweeps = n_sweeps
        self.min_count = min_count
        self.stopwords = stopwords
        self.seed = seed
        self.check_counts = check_counts

    # ------------------------------------------------------------------
    # fitting

    def fit(self, texts: Sequence[str], user_ids: Sequence[str], vocabulary: Vocabulary | None = None):
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        alpha = 50.0 / self.n_topics if self.alpha is None else float(self.alpha)
        if alpha <= 0 or self.beta <= 0 or self.gamma <= 0:
            raise ValueError("hyperparameters must be positive")
        if self.n_sweeps < 0:
            raise ValueError("n_sweeps must be >= 0")
        if len(texts) != len(user_ids):
            raise ValueError("texts and user_ids must have equal length")
        if len(texts) == 0:
            raise ValueError("empty corpus")

        vocab = vocabulary or build_vocabulary(texts, self.min_count, self.stopwords)
        if len(vocab) == 0:
            raise ValueError("vocabulary is empty; lower min_count or supply more text")

        users: list[str] = []
        user_index: dict[str, int] = {}
        doc_user = np.empty(len(texts), dtype=np.int64)
        docs: list[np.ndarray] = []
        for d, (text, uid) in enumerate(zip(texts, user_ids)):
            uid = str(uid)
            if uid not in user_index:
                user_index[uid] = len(users)
                users.append(uid)
            doc_user[d] = user_index[uid]
            _, words = tokenize(text)
            docs.append(vocab.ids(words))

        T = self.n_topics
        U = len(users)
        V = len(vocab)
        beta, gamma = float(self.beta), float(self.gamma)
        rng = np.random.default_rng(self.seed)

        z = rng.integers(0, T, size=len(docs))
        y = [rng.integers(0, 2, size=ids.size).astype(np.int8) for ids in docs]

        n_uk = np.zeros((U, T), dtype=np.int64)
        n_u = np.bincount(doc_user, minlength=U).astype(np.int64)
        n_kw = np.zeros((T, V), dtype=np.int64)
        n_k = np.zeros(T, dtype=np.int64)
        n_bw = np.zeros(V, dtype=np.int64)
        n_b = 0
        n_y = [0, 0]
        for d, ids in enumerate(docs):
            n_uk[doc_user[d], z[d]] += 1
            yd = y[d]
            topic_ids = ids[yd == 1]
            bg_ids = ids[yd == 0]
            if topic_ids.size:
                np.add.at(n_kw[z[d]], topic_ids, 1)
                n_k[z[d]] += topic_ids.size
            if bg_ids.size:
                np.add.at(n_bw, bg_ids, 1)
                n_b += bg_ids.size
            n_y[1] += int(topic_ids.size)
            n_y[0] += int(bg_ids.size)

        v_beta = V * beta
        doc_lists = [ids.tolist() for ids in docs]
        bg_counts = n_bw.tolist()  # python ints are cheaper in the switch loop
        random = rng.random
        for _ in range(self.n_sweeps):
            # phase 1: resample each tweet's topic
            for d, ids in enumerate(docs):
                u = doc_user[d]
                k_old = int(z[d])
                yd = y[d]
                word_list = doc_lists[d]
                topic_list = [word_list[i] for i in range(len(word_list)) if yd[i] == 1]
                m = len(topic_list)
                n_uk[u, k_old] -= 1
                if m:
                    row = n_kw[k_old]
                    for w in topic_list:
                        row[w] -= 1
                    n_k[k_old] -= m
                logp = np.log(n_uk[u] + alpha)
                if m:
                    wr, jr = _occurrence_indices(topic_list)
                    logp += np.log(n_kw[:, wr] + (beta + np.array(jr))).sum(axis=1)
                    logp -= np.log(n_k[:, None] + (v_beta + np.arange(m))).sum(axis=1)
                p = np.exp(logp - logp.max())
                cdf = np.cumsum(p)
                k_new = int(np.searchsorted(cdf, random() * cdf[-1], side="right"))
                if k_new >= T:  # guard against fp edge at the top of the cdf
                    k_new = T - 1
                z[d] = k_new
                n_uk[u, k_new] += 1
                if m:
                    row = n_kw[k_new]
                    for w in topic_list:
                        row[w] += 1
                    n_k[k_new] += m
            # phase 2: resample each word's background/topic switch
            n_y0, n_y1 = n_y
            for d, word_list in enumerate(doc_lists):
                k = int(z[d])
                yd = y[d]
                row = n_kw[k]
                topic_total = int(n_k[k])
                for i, w in enumerate(word_list):
                    if yd[i] == 0:
                        bg_counts[w] -= 1
                        n_b -= 1
                        n_y0 -= 1
                    else:
                        row[w] -= 1
                        topic_total -= 1
                        n_y1 -= 1
                    p0 = (n_y0 + gamma) * (bg_counts[w] + beta) / (n_b + v_beta)
                    p1 = (n_y1 + gamma) * (row[w] + beta) / (topic_total + v_beta)
                    if random() * (p0 + p1) < p0:
                        yd[i] = 0
                        bg_counts[w] += 1
                        n_b += 1
                        n_y0 += 1
                    else:
                        yd[i] = 1
                        row[w] += 1
                        topic_total += 1
                        n_y1 += 1
                n_k[k] = topic_total
            n_y = [n_y0, n_y1]
            if self.check_counts:
                n_bw = np.array(bg_counts, dtype=np.int64)
                self._verify_counts(docs, doc_user, z, y, n_uk, n_kw, n_k, n_bw, n_b, n_y)
        n_bw = np.array(bg_counts, dtype=np.int64)

        self.alpha_ = alpha
        self.vocabulary_ = vocab
        self.users_ = tuple(users)
        self.user_index_ = user_index
        self.theta_ = (n_uk + alpha) / (n_u[:, None] + T * alpha)
        self.phi_ = (n_kw + beta) / (n_k[:, None] + v_beta)
        self.phi_background_ = (n_bw + beta) / (n_b + v_beta)
        self.pi_ = (n_y[1] + gamma) / (n_y[0] + n_y[1] + 2.0 * gamma)
        return self

    @staticmethod
    def _verify_counts(docs, doc_user, z, y, n_uk, n_kw, n_k, n_bw, n_b, n_y) -> None:
        U, T = n_uk.shape
        V = n_kw.shape[1]
        r_uk = np.zeros((U, T), dtype=np.int64)
        r_kw = np.zeros((T, V), dtype=np.int64)
        r_bw = np.zeros(V, dtype=np.int64)
        r_y = [0, 0]
        for d, ids in enumerate(docs):
            r_uk[doc_user[d], z[d]] += 1
            topic_ids = ids[y[d] == 1]
            bg_ids = ids[y[d] == 0]
            np.add.at(r_kw[z[d]], topic_ids, 1)
            np.add.at(r_bw, bg_ids, 1)
            r_y[1] += int(topic_ids.size)
            r_y[0] += int(bg_ids.size)
        assert np.array_equal(r_uk, n_uk), "user-topic table out of sync"
        assert np.array_equal(r_kw, n_kw), "topic-word table out of sync"
        assert np.array_equal(r_kw.sum(axis=1), n_k), "topic totals out of sync"
        assert np.array_equal(r_bw, n_bw), "background table out of sync"
        assert r_bw.sum() == n_b and r_y == list(n_y), "switch totals out of sync"

    # ------------------------------------------------------------------
    # inference

    def _require_fitted(self) -> None:
        if not hasattr(self, "phi_"):
            raise NotFittedError("TwitterLda instance is not fitted yet")

    def infer_tweet_topic(self, text: str) -> np.ndarray:
        """Posterior p(topic | tweet words) under the fitted phi, in log space.

        Tweets with no in-vocabulary words get the uniform distribution.
        """
        self._require_fitted()
        _, words = tokenize(text)
        ids = self.vocabulary_.ids(words)
        T = self.phi_.shape[0]
        if ids.size == 0:
            return np.full(T, 1.0 / T)
        logp = np.log(self.phi_[:, ids]).sum(axis=1)
        p = np.exp(logp - logp.max())
        return p / p.sum()

    def transform(self, texts: Sequence[str]) -> np.ndarray:
        """Row-wise topic posteriors for a batch of texts."""
        return np.array([self.infer_tweet_topic(t) for t in texts])

    def user_topic_distribution(self, user_id: str) -> np.ndarray:
        self._require_fitted()
        idx = self.user_index_.get(str(user_id))
        if idx is None:
            raise KeyError(f"unknown user {user_id!r}")
        return self.theta_[idx].copy()

    # ------------------------------------------------------------------
    # persistence

    def to_json(self) -> dict:
        self._require_fitted()
        return {
            "n_topics": self.n_topics,
            "alpha": self.alpha_,
            "beta": self.beta,
            "gamma": self.gamma,
            "n_sweeps": self.n_sweeps,
            "min_count": self.min_count,
            "seed": self.seed,
            "pi": self.pi_,
            "vocab": list(self.vocabulary_.words),
            "users": list(self.users_),
            "theta": self.theta_.tolist(),
            "phi": self.phi_.tolist(),
            "phi_background": self.phi_background_.tolist(),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TwitterLda":
        model = cls(
            n_topics=payload["n_topics"],
            alpha=payload["alpha"],
            beta=payload["beta"],
            gamma=payload["gamma"],
            n_sweeps=payload["n_sweeps"],
            min_count=payload["min_count"],
            seed=payload["seed"],
        )
        words = tuple(payload["vocab"])
        model.vocabulary_ = Vocabulary(words=words, index={w: i for i, w in enumerate(words)})
        model.users_ = tuple(payload["users"])
        model.user_index_ = {u: i for i, u in enumerate(model.users_)}
        model.alpha_ = float(payload["alpha"])
        model.theta_ = np.array(payload["theta"], dtype=np.float64)
        model.phi_ = np.array(payload["phi"], dtype=np.float64)
        model.phi_background_ = np.array(payload["phi_background"], dtype=np.float64)
        model.pi_ = float(payload["pi"])
        return model

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TwitterLda":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
