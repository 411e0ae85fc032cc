"""Deterministic synthetic corpora: a planted two-topic benchmark and the
FibVID-shaped sample bundled with the package.

The sample has two planted vocabularies (health vs civic), power-law
follower counts, and retweet counts that grow with author influence and
claim fakeness, so share labels carry learnable signal and the
auto-calibrated threshold lands near a balanced split.
"""

from __future__ import annotations

import argparse
import csv
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

POOL_HEALTH = (
    "vaccine virus pandemic hospital doctor symptom infection quarantine mask immunity "
    "outbreak patient treatment dose booster antibody ventilator testing clinic nurse "
    "fever cough isolation epidemic transmission variant sanitizer lockdown respirator ward "
    "diagnosis recovery mortality pathogen swab serology inoculation triage paramedic vitals "
    "contagion incubation asymptomatic antiviral oxygen icu surge screening distancing herd"
).split()

POOL_CIVIC = (
    "election senate ballot policy economy inflation market congress tariff budget "
    "campaign debate governor legislation tax vote parliament minister treaty sanction "
    "diplomat border immigration unemployment subsidy deficit reform lobbyist amendment court "
    "justice verdict scandal resignation coalition referendum manifesto austerity pension welfare "
    "infrastructure municipality mayor council audit regulator antitrust embargo summit quorum"
).split()

_POSITIVE_WORDS = ("great", "hopeful", "effective", "reliable", "impressive", "successful")
_NEGATIVE_WORDS = ("terrible", "dangerous", "misleading", "alarming", "corrupt", "fraudulent")
_PRONOUNS = ("i", "we", "you", "it", "they")
_POLYSYLLABIC = ("unbelievable", "extraordinary", "investigation", "misinformation", "accountability")


def planted_corpus(
    n_users: int = 200,
    tweets_per_user: int = 10,
    words_per_tweet: int = 8,
    vocab_size: int = 50,
    seed: int = 0,
) -> tuple[list[str], list[str], np.ndarray]:
    """Two disjoint planted vocabularies; each user draws from exactly one.

    Returns (texts, author ids, per-user group array with values 0/1).
    """
    if vocab_size > len(POOL_HEALTH) or vocab_size > len(POOL_CIVIC):
        raise ValueError("vocab_size exceeds the built-in word pools")
    rng = np.random.default_rng(seed)
    pools = (POOL_HEALTH[:vocab_size], POOL_CIVIC[:vocab_size])
    groups = np.array([u % 2 for u in range(n_users)])
    texts: list[str] = []
    authors: list[str] = []
    for u in range(n_users):
        pool = pools[groups[u]]
        for _ in range(tweets_per_user):
            words = rng.choice(pool, size=words_per_tweet, replace=True)
            texts.append(" ".join(words))
            authors.append(f"u{u:04d}")
    return texts, authors, groups


def two_gaussian_dataset(
    n: int = 700, separation: float = 2.0, seed: int = 42
) -> tuple[np.ndarray, np.ndarray]:
    """Two unit-variance 2-D Gaussians at (+sep, +sep) and (-sep, -sep)."""
    rng = np.random.default_rng(seed)
    half = n // 2
    pos = rng.normal(loc=separation, scale=1.0, size=(half, 2))
    neg = rng.normal(loc=-separation, scale=1.0, size=(n - half, 2))
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(half, dtype=np.int64), np.zeros(n - half, dtype=np.int64)])
    perm = rng.permutation(n)
    return X[perm], y[perm]


def linear_regression_dataset(
    n: int = 200, slope: float = 3.0, noise: float = 0.1, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """y = slope * x + Gaussian noise, single feature."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, size=n)
    y = slope * x + rng.normal(0.0, noise, size=n)
    return x.reshape(-1, 1), y


_CLAIM_PLAN = (
    ("covid", "fake", 8),
    ("covid", "true", 5),
    ("noncovid", "fake", 6),
    ("noncovid", "true", 5),
)


def generate_sample(out_dir: str | Path, seed: int = 20240517, n_tweets: int = 360, n_users: int = 80) -> dict:
    """Write claims.csv, propagation.csv, users.csv under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    epoch = datetime(2020, 6, 1, tzinfo=timezone.utc)

    claims = []
    i = 0
    for category, truth, count in _CLAIM_PLAN:
        pool = POOL_HEALTH if category == "covid" else POOL_CIVIC
        for _ in range(count):
            words = list(rng.choice(pool, size=10, replace=False))
            words.insert(3, str(rng.choice(_POLYSYLLABIC)))
            tone = _NEGATIVE_WORDS if truth == "fake" else _POSITIVE_WORDS
            words.append(str(rng.choice(tone)))
            text = " ".join(words[:7]).capitalize() + ". " + " ".join(words[7:]).capitalize() + "."
            claims.append({"claim_id": f"c{i:03d}", "text": text, "truth_label": truth, "category": category})
            i += 1

    users = []
    for u in range(n_users):
        followers = int(rng.pareto(1.2) * 40) + int(rng.integers(0, 8))
        following = int(rng.lognormal(4.0, 1.0))
        group = "health" if u % 2 == 0 else "civic"
        users.append(
            {
                "user_id": f"u{u:03d}",
                "description": f"synthetic {group} account",
                "follower_count": followers,
                "following_count": following,
                "created_at": (epoch - timedelta(days=int(rng.integers(30, 900)))).isoformat(),
            }
        )

    claims_by_category: dict[str, list[dict]] = {"covid": [], "noncovid": []}
    for claim in claims:
        claims_by_category[claim["category"]].append(claim)

    tweets = []
    for t in range(n_tweets):
        u = int(rng.integers(0, n_users))
        user = users[u]
        category = "covid" if u % 2 == 0 else "noncovid"
        claim = claims_by_category[category][int(rng.integers(0, len(claims_by_category[category])))]
        pool = POOL_HEALTH if category == "covid" else POOL_CIVIC
        words = [str(w) for w in rng.choice(pool, size=int(rng.integers(6, 12)), replace=True)]
        if claim["truth_label"] == "fake":
            words.append(str(rng.choice(_NEGATIVE_WORDS)))
        else:
            words.append(str(rng.choice(_POSITIVE_WORDS)))
        if rng.random() < 0.5:
            words.insert(0, str(rng.choice(_PRONOUNS)))
        if rng.random() < 0.3:
            words.append(str(rng.choice(_POLYSYLLABIC)))
        text = " ".join(words).capitalize() + "."
        # retweets grow with author influence and fakeness: the learnable signal
        influence = np.log1p(user["follower_count"])
        fake_lift = 1.1 if claim["truth_label"] == "fake" else 0.0
        score = 0.55 * influence + fake_lift + rng.normal(0.0, 0.7) - 1.8
        retweets = max(0, int(round(np.expm1(max(score, 0.0)))))
        likes = max(0, int(round(retweets * rng.uniform(0.6, 1.8))) + int(rng.integers(0, 3)))
        hashtags = [str(rng.choice(pool))] if rng.random() < 0.4 else []
        tweets.append(
            {
                "tweet_id": f"t{t:05d}",
                "claim_id": claim["claim_id"],
                "user_id": user["user_id"],
                "text": text,
                "retweet_count": retweets,
                "like_count": likes,
                "hashtags": " ".join(hashtags),
                "created_at": (epoch + timedelta(minutes=7 * t)).isoformat(),
            }
        )

    _write_csv(out / "claims.csv", claims, ("claim_id", "text", "truth_label", "category"))
    _write_csv(
        out / "propagation.csv",
        tweets,
        ("tweet_id", "claim_id", "user_id", "text", "retweet_count", "like_count", "hashtags", "created_at"),
    )
    _write_csv(
        out / "users.csv",
        users,
        ("user_id", "description", "follower_count", "following_count", "created_at"),
    )
    return {"claims": len(claims), "tweets": len(tweets), "users": len(users)}


def _write_csv(path: Path, rows: list[dict], fields: tuple[str, ...]) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fields))
        writer.writeheader()
        writer.writerows(rows)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="regenerate the bundled synthetic sample")
    parser.add_argument("--out", required=True)
    parser.add_argument("--seed", type=int, default=20240517)
    parser.add_argument("--tweets", type=int, default=360)
    args = parser.parse_args(argv)
    counts = generate_sample(args.out, seed=args.seed, n_tweets=args.tweets)
    print(counts)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
