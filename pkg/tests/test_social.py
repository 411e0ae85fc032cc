from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.exceptions import NotFittedError

from newsdiffusion.corpus import TweetRecord, UserProfile
from newsdiffusion.ml import RandomForestClassifier
from newsdiffusion.social import (
    LabelingError,
    SocialFeatures,
    acceptance_score,
    feature_names,
    label_shared,
    merge_features,
    predict_spread,
    tff,
)
from newsdiffusion.textfeat import extract_features, TextConfig
from newsdiffusion.topics import TwitterLda, Vocabulary

EPOCH = datetime(2020, 1, 1, tzinfo=timezone.utc)


def tweet(tweet_id, retweets, user_id="u1", claim_id="c1", minutes=0, text="hello world"):
    return TweetRecord(
        tweet_id=tweet_id,
        claim_id=claim_id,
        user_id=user_id,
        text=text,
        retweet_count=retweets,
        like_count=0,
        hashtags=(),
        created_at=EPOCH + timedelta(minutes=minutes),
    )


def profile(user_id, followers=10, following=5):
    return UserProfile(
        user_id=user_id,
        description="",
        follower_count=followers,
        following_count=following,
        created_at=EPOCH,
    )


class TestTff:
    def test_zero_case(self):
        assert tff(0, 0) == 1.0

    def test_direct_substitution(self):
        assert tff(99, 49) == 2.0
        assert tff(0, 999) == 0.001

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            tff(-1, 0)
        with pytest.raises(ValueError):
            tff(0, -1)

    def test_monotonicity_random_pairs(self):
        rng = np.random.default_rng(0)
        for _ in range(10_000):
            followers, following = (int(v) for v in rng.integers(0, 10_000, size=2))
            assert tff(followers + 1, following) > tff(followers, following)
            assert tff(followers, following + 1) < tff(followers, following)

    def test_social_features_invariant(self):
        feats = SocialFeatures.from_counts(99, 49, 3, 7)
        assert feats.tff == (99 + 1) / (49 + 1)


class TestLabelShared:
    def test_fixed_threshold(self):
        tweets = [tweet("t1", 0), tweet("t2", 1), tweet("t3", 5)]
        result = label_shared(tweets, tau=1)
        assert result.labels.tolist() == [0, 1, 1]

    def test_all_zero_counts(self):
        tweets = [tweet(f"t{i}", 0) for i in range(4)]
        for tau in (1, 3, 10):
            assert label_shared(tweets, tau=tau).labels.sum() == 0

    def test_auto_calibration_matches_enumeration(self):
        counts = [0, 0, 0, 1, 2, 3, 4, 5, 9, 10]
        tweets = [tweet(f"t{i}", c) for i, c in enumerate(counts)]
        result = label_shared(tweets)  # tau=None -> auto
        # independent enumeration: smallest tau with positive rate in band
        expected_tau = None
        for tau in range(1, max(counts) + 2):
            rate = sum(c >= tau for c in counts) / len(counts)
            if 0.40 <= rate <= 0.50:
                expected_tau = tau
                break
        assert expected_tau == 3
        assert result.tau == expected_tau
        assert 0.40 <= result.positive_rate <= 0.50

    def test_auto_calibration_infeasible(self):
        tweets = [tweet(f"t{i}", 0) for i in range(5)]
        with pytest.raises(LabelingError):
            label_shared(tweets)

    def test_monotone_in_tau(self):
        rng = np.random.default_rng(1)
        tweets = [tweet(f"t{i}", int(c)) for i, c in enumerate(rng.integers(0, 20, size=60))]
        previous = label_shared(tweets, tau=1).labels
        for tau in range(2, 22):
            current = label_shared(tweets, tau=tau).labels
            assert not np.any(current > previous)  # raising tau never adds positives
            previous = current

    def test_follower_evidence(self):
        tweets = [
            tweet("t1", 0, user_id="author", minutes=0),
            tweet("t2", 0, user_id="follower", minutes=10),
            tweet("t3", 0, user_id="stranger", claim_id="c2", minutes=20),
        ]
        edges = [("follower", "author")]
        result = label_shared(tweets, mode="follower_evidence", edges=edges)
        assert result.labels.tolist() == [1, 0, 0]

    def test_follower_evidence_needs_edges(self):
        with pytest.raises(LabelingError):
            label_shared([tweet("t1", 0)], mode="follower_evidence")

    def test_unknown_mode(self):
        with pytest.raises(LabelingError):
            label_shared([tweet("t1", 0)], mode="sideways")


class TestMergeFeatures:
    def build(self, n_topics=2, text="I think it works well"):
        comp, psych, sty = extract_features(text, TextConfig(lexicon={"well": (0.5, 0.4)}))
        social = SocialFeatures.from_counts(10, 5, 2, 7)
        theta = np.full(n_topics, 1.0 / n_topics)
        posterior = np.full(n_topics, 1.0 / n_topics)
        return merge_features(comp, psych, sty, social, theta, posterior)

    def test_vector_length_two_topics(self):
        vector = self.build(n_topics=2)
        names = feature_names(2)
        assert len(names) == 21
        assert vector.shape == (21,)

    def test_names_stable_across_instances(self):
        assert feature_names(3) == feature_names(3)
        a = self.build(text="I think it works")
        b = self.build(text="The report says so")
        assert a.shape == b.shape

    def test_target_never_a_feature(self):
        for n_topics in (1, 2, 5):
            names = feature_names(n_topics)
            assert "retweet_count" not in names
            assert "label" not in names and "target" not in names

    def test_dimension_mismatch_rejected(self):
        comp, psych, sty = extract_features("hello", TextConfig(lexicon={}))
        social = SocialFeatures.from_counts(1, 1, 0, 0)
        with pytest.raises(ValueError):
            merge_features(comp, psych, sty, social, np.ones(2) / 2, np.ones(3) / 3)

    def test_unknown_target_rejected(self):
        comp, psych, sty = extract_features("hello", TextConfig(lexicon={}))
        social = SocialFeatures.from_counts(1, 1, 0, 0)
        with pytest.raises(ValueError):
            merge_features(comp, psych, sty, social, np.ones(2) / 2, np.ones(2) / 2, target="oops")


class TestAcceptanceScore:
    def test_aligned_degenerate(self):
        assert acceptance_score([1.0, 0.0], [1.0, 0.0], tff_sender=25.0, tff_norm=10.0) == 1.0

    def test_orthogonal_interests(self):
        assert acceptance_score([1.0, 0.0], [0.0, 1.0], tff_sender=25.0) == 0.0

    def test_uniform_dot_product(self):
        quarter = np.full(4, 0.25)
        assert acceptance_score(quarter, quarter, tff_sender=10.0, tff_norm=10.0) == pytest.approx(0.25)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            acceptance_score([1.0], [0.5, 0.5], tff_sender=1.0)

    def test_equals_dot_product_when_sender_capped(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            theta = rng.dirichlet(np.ones(5))
            posterior = rng.dirichlet(np.ones(5))
            score = acceptance_score(theta, posterior, tff_sender=50.0, tff_norm=10.0)
            assert score == pytest.approx(float(theta @ posterior))

    @given(
        st.integers(min_value=0, max_value=10_000),
        st.integers(min_value=0, max_value=10_000),
        st.integers(min_value=2, max_value=8),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    @settings(max_examples=200, deadline=None)
    def test_bounds(self, followers, following, n_topics, seed):
        rng = np.random.default_rng(seed)
        theta = rng.dirichlet(np.ones(n_topics))
        posterior = rng.dirichlet(np.ones(n_topics))
        score = acceptance_score(theta, posterior, tff_sender=tff(followers, following))
        assert 0.0 <= score <= 1.0


def _toy_topic_model():
    model = TwitterLda(n_topics=2)
    model.vocabulary_ = Vocabulary(words=("vaccine", "ballot"), index={"vaccine": 0, "ballot": 1})
    model.users_ = ("u1", "u2")
    model.user_index_ = {"u1": 0, "u2": 1}
    model.alpha_ = 1.0
    model.theta_ = np.array([[0.9, 0.1], [0.2, 0.8]])
    model.phi_ = np.array([[0.95, 0.05], [0.1, 0.9]])
    model.phi_background_ = np.array([0.5, 0.5])
    model.pi_ = 0.8
    return model


class _ConstantClassifier:
    def __init__(self, proba):
        self._proba = proba

    def predict_proba(self, X):
        return np.full(X.shape[0], self._proba)


class _ConstantRegressor:
    def __init__(self, value):
        self._value = value

    def predict(self, X):
        return np.full(X.shape[0], self._value)


class TestPredictSpread:
    CONFIG = TextConfig(lexicon={"vaccine": (0.1, 0.2)})

    def test_zero_probability_classifier(self):
        estimate = predict_spread(
            _ConstantClassifier(0.0),
            profile("u1"),
            "vaccine news",
            [profile("u2"), profile("r2")],
            topic_model=_toy_topic_model(),
            text_config=self.CONFIG,
        )
        assert estimate.expected_shares == 0.0

    def test_constant_half_three_recipients(self):
        estimate = predict_spread(
            _ConstantClassifier(0.5),
            profile("u1"),
            "vaccine news",
            [profile("a"), profile("b"), profile("c")],
            topic_model=_toy_topic_model(),
            text_config=self.CONFIG,
        )
        assert estimate.expected_shares == pytest.approx(1.5)
        assert len(estimate.per_recipient_scores) == 3
        assert estimate.mode == "cascade"

    def test_regressor_clamped_at_zero(self):
        estimate = predict_spread(
            _ConstantRegressor(-3.2),
            profile("u1"),
            "vaccine news",
            [],
            topic_model=_toy_topic_model(),
            text_config=self.CONFIG,
        )
        assert estimate.expected_shares == 0.0
        assert estimate.mode == "regressor"

    def test_untrained_model_rejected(self):
        with pytest.raises(NotFittedError):
            predict_spread(
                RandomForestClassifier(),
                profile("u1"),
                "vaccine news",
                [profile("u2")],
                topic_model=_toy_topic_model(),
                text_config=self.CONFIG,
            )
