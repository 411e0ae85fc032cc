"""Social-strength features, share labeling, and spread estimation.

The follower-following ratio (with +1 on both counts to avoid division
by zero) proxies a user's influence. Labels mark whether a posted item
was propagated; the default mode thresholds the retweet count, with an
auto-calibration that targets a roughly balanced class split. Spread is
estimated one network level out by summing per-recipient acceptance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .corpus import TweetRecord, UserProfile
from .textfeat import (
    ComplexityBand,
    ComplexityFeatures,
    PsychFeatures,
    SentimentBand,
    StyleBand,
    StyleFeatures,
    TextConfig,
    extract_features,
)
from .topics import TwitterLda

DEFAULT_TFF_NORM = 10.0
DEFAULT_RATE_BAND = (0.40, 0.50)


class LabelingError(Exception):
    """Share labeling could not be performed as configured."""


def tff(follower_count: int, following_count: int) -> float:
    """Follower-following ratio: (followers + 1) / (following + 1)."""
    if follower_count < 0 or following_count < 0:
        raise ValueError("follow counts must be non-negative")
    return (follower_count + 1) / (following_count + 1)


@dataclass(frozen=True)
class SocialFeatures:
    tff: float
    follower_count: int
    following_count: int
    like_count: int
    retweet_count: int

    @classmethod
    def from_counts(
        cls, follower_count: int, following_count: int, like_count: int, retweet_count: int
    ) -> "SocialFeatures":
        return cls(
            tff=tff(follower_count, following_count),
            follower_count=follower_count,
            following_count=following_count,
            like_count=like_count,
            retweet_count=retweet_count,
        )


@dataclass(frozen=True)
class ShareLabels:
    """Binary share labels (1 = shared) plus the threshold that produced them."""

    labels: np.ndarray
    mode: str
    tau: int | None
    positive_rate: float


def _auto_tau(counts: np.ndarray, band: tuple[float, float]) -> int:
    """Smallest threshold whose positive rate falls inside the band."""
    lo, hi = band
    if counts.size == 0:
        raise LabelingError("no tweets to label")
    for tau in range(1, int(counts.max()) + 2):
        rate = float((counts >= tau).mean())
        if lo <= rate <= hi:
            return tau
    raise LabelingError(
        f"no retweet threshold yields a positive rate in [{lo}, {hi}]; "
        "set labeling tau explicitly"
    )


def label_shared(
    tweets: Sequence[TweetRecord],
    mode: str = "retweet_threshold",
    tau: int | None = None,
    edges: Iterable[tuple[str, str]] | None = None,
    rate_band: tuple[float, float] = DEFAULT_RATE_BAND,
) -> ShareLabels:
    """Label each tweet shared / not shared.

    retweet_threshold: shared iff retweet_count >= tau; tau=None picks
    the smallest threshold with a positive rate inside ``rate_band``.
    follower_evidence: shared iff a follower of the author posted on the
    same claim strictly later; requires (follower, followee) edges.
    """
    if mode == "retweet_threshold":
        counts = np.array([t.retweet_count for t in tweets], dtype=np.int64)
        if tau is None:
            tau = _auto_tau(counts, rate_band)
        elif tau < 1:
            raise LabelingError("tau must be >= 1")
        labels = (counts >= tau).astype(np.int8)
        return ShareLabels(labels=labels, mode=mode, tau=int(tau), positive_rate=float(labels.mean()))
    if mode == "follower_evidence":
        if edges is None:
            raise LabelingError("follower_evidence mode requires follow edges")
        followers_of: dict[str, set[str]] = {}
        for follower, followee in edges:
            followers_of.setdefault(str(followee), set()).add(str(follower))
        by_claim: dict[str, list[TweetRecord]] = {}
        for t in tweets:
            by_claim.setdefault(t.claim_id, []).append(t)
        labels = np.zeros(len(tweets), dtype=np.int8)
        for i, t in enumerate(tweets):
            mine = followers_of.get(t.user_id, set())
            if not mine:
                continue
            for other in by_claim[t.claim_id]:
                if other.user_id in mine and other.created_at > t.created_at:
                    labels[i] = 1
                    break
        return ShareLabels(labels=labels, mode=mode, tau=None, positive_rate=float(labels.mean()))
    raise LabelingError(f"unknown labeling mode {mode!r}")


# ----------------------------------------------------------------------
# feature merging

_TEXT_SOCIAL_NAMES = (
    "smog",
    "lexical_diversity",
    "avg_word_length",
    "complexity_simple",
    "complexity_medium",
    "complexity_complex",
    "polarity",
    "subjectivity",
    "sentiment_positive",
    "sentiment_negative",
    "sentiment_neutral",
    "personal_pronouns",
    "impersonal_pronouns",
    "stylic",
    "tff",
    "follower_count",
    "like_count",
)

VALID_TARGETS = ("share_label", "retweet_count")


def feature_names(n_topics: int) -> list[str]:
    """Ordered feature names for a merged vector with n_topics topics."""
    names = list(_TEXT_SOCIAL_NAMES)
    names += [f"author_topic_{k}" for k in range(n_topics)]
    names += [f"tweet_topic_{k}" for k in range(n_topics)]
    return names


def merge_features(
    complexity: ComplexityFeatures,
    psych: PsychFeatures,
    style: StyleFeatures,
    social: SocialFeatures,
    theta_author: np.ndarray,
    topic_posterior: np.ndarray,
    target: str = "share_label",
) -> np.ndarray:
    """Concatenate one instance's features in the canonical order.

    The target variable (share label or retweet count) is never part of
    the vector; retweet_count in particular is excluded in both modes.
    """
    if target not in VALID_TARGETS:
        raise ValueError(f"unknown target {target!r}")
    theta_author = np.asarray(theta_author, dtype=np.float64)
    topic_posterior = np.asarray(topic_posterior, dtype=np.float64)
    if theta_author.shape != topic_posterior.shape:
        raise ValueError(
            f"topic dimension mismatch: theta {theta_author.shape} vs posterior {topic_posterior.shape}"
        )
    values = [
        complexity.smog,
        complexity.lexical_diversity,
        complexity.avg_word_length,
        float(complexity.category == ComplexityBand.SIMPLE),
        float(complexity.category == ComplexityBand.MEDIUM),
        float(complexity.category == ComplexityBand.COMPLEX),
        psych.polarity,
        psych.subjectivity,
        float(psych.category == SentimentBand.POSITIVE),
        float(psych.category == SentimentBand.NEGATIVE),
        float(psych.category == SentimentBand.NEUTRAL),
        float(style.personal_pronouns),
        float(style.impersonal_pronouns),
        float(style.category == StyleBand.STYLIC),
        social.tff,
        float(social.follower_count),
        float(social.like_count),
    ]
    return np.concatenate([np.array(values, dtype=np.float64), theta_author, topic_posterior])


# ----------------------------------------------------------------------
# acceptance and spread

def acceptance_score(
    theta_recipient: np.ndarray,
    topic_posterior: np.ndarray,
    tff_sender: float,
    tff_norm: float = DEFAULT_TFF_NORM,
) -> float:
    """Topical affinity (dot product of simplexes) scaled by capped sender TFF."""
    theta_recipient = np.asarray(theta_recipient, dtype=np.float64)
    topic_posterior = np.asarray(topic_posterior, dtype=np.float64)
    if theta_recipient.shape != topic_posterior.shape:
        raise ValueError("simplex length mismatch")
    if tff_norm <= 0:
        raise ValueError("tff_norm must be positive")
    affinity = float(theta_recipient @ topic_posterior)
    return affinity * min(tff_sender, tff_norm) / tff_norm


@dataclass(frozen=True)
class SpreadEstimate:
    expected_shares: float
    per_recipient_scores: list[tuple[str, float]] = field(default_factory=list)
    mode: str = "cascade"

    def to_dict(self) -> dict:
        return {
            "expected_shares": self.expected_shares,
            "mode": self.mode,
            "per_recipient_scores": [
                {"user_id": uid, "acceptance": score} for uid, score in self.per_recipient_scores
            ],
        }


def _prospective_vector(
    profile: UserProfile,
    tweet_text: str,
    like_count: int,
    topic_model: TwitterLda,
    topic_posterior: np.ndarray,
    text_config: TextConfig | None,
) -> np.ndarray:
    comp, psych, sty = extract_features(tweet_text, text_config)
    social = SocialFeatures.from_counts(profile.follower_count, profile.following_count, like_count, 0)
    try:
        theta = topic_model.user_topic_distribution(profile.user_id)
    except KeyError:
        # cold-start user: no posting history, fall back to the uniform prior
        theta = np.full(topic_posterior.shape, 1.0 / topic_posterior.size)
    return merge_features(comp, psych, sty, social, theta, topic_posterior)


def predict_spread(
    model,
    sender: UserProfile,
    tweet_text: str,
    recipients: Sequence[UserProfile],
    *,
    topic_model: TwitterLda,
    text_config: TextConfig | None = None,
    like_count: int = 0,
) -> SpreadEstimate:
    """Expected single-level spread of a new tweet.

    Classifiers (anything exposing predict_proba) run in cascade mode:
    each recipient is scored as a prospective sharer and acceptance
    probabilities are summed. Regressors predict the sender's retweet
    count directly, clamped at zero.
    """
    posterior = topic_model.infer_tweet_topic(tweet_text)
    if hasattr(model, "predict_proba"):
        scores: list[tuple[str, float]] = []
        for recipient in recipients:
            x = _prospective_vector(recipient, tweet_text, like_count, topic_model, posterior, text_config)
            proba = float(np.asarray(model.predict_proba(x.reshape(1, -1))).ravel()[-1])
            scores.append((recipient.user_id, proba))
        return SpreadEstimate(
            expected_shares=float(sum(s for _, s in scores)),
            per_recipient_scores=scores,
            mode="cascade",
        )
    x = _prospective_vector(sender, tweet_text, like_count, topic_model, posterior, text_config)
    predicted = float(np.asarray(model.predict(x.reshape(1, -1))).ravel()[0])
    return SpreadEstimate(expected_shares=max(predicted, 0.0), per_recipient_scores=[], mode="regressor")
