"""Complexity, sentiment, and stylistic features for short news text.

All functions are deterministic pure functions of (text, configuration):
no global state, no model downloads. Sentiment is lexicon-based; a small
English lexicon ships with the package (TSV: word, polarity,
subjectivity) and callers may substitute their own.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+(?=\s|$)")
_TOKEN_RE = re.compile(r"[a-z0-9']+")
_VOWELS = frozenset("aeiouy")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")

SMOG_COEFFICIENT = 1.0430
SMOG_INTERCEPT = 3.1291

DEFAULT_NEGATORS = ("not", "no", "never")
DEFAULT_PERSONAL_PRONOUNS = (
    "i", "we", "you", "he", "she", "they",
    "me", "us", "him", "her", "them",
    "my", "our", "your", "his", "their",
    "mine", "ours", "yours", "hers", "theirs",
    "myself", "ourselves", "yourself", "yourselves",
    "himself", "herself", "themselves",
)
DEFAULT_IMPERSONAL_PRONOUNS = (
    "it", "its", "itself", "one", "oneself",
    "something", "anything", "nothing", "everything",
    "someone", "anyone", "everyone",
    "somebody", "anybody", "nobody", "everybody",
)


class ComplexityBand(str, Enum):
    SIMPLE = "simple"
    MEDIUM = "medium"
    COMPLEX = "complex"


class SentimentBand(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class StyleBand(str, Enum):
    STYLIC = "stylic"
    NONSTYLIC = "nonstylic"


@dataclass(frozen=True)
class ComplexityFeatures:
    smog: float
    lexical_diversity: float
    avg_word_length: float
    category: ComplexityBand


@dataclass(frozen=True)
class PsychFeatures:
    polarity: float
    subjectivity: float
    category: SentimentBand


@dataclass(frozen=True)
class StyleFeatures:
    personal_pronouns: int
    impersonal_pronouns: int
    category: StyleBand


def tokenize(text: str) -> tuple[list[str], list[str]]:
    """Split text into sentences and lowercase word tokens.

    URLs and @mentions are removed and the '#' marker is stripped
    (hashtag bodies are kept as words) before splitting. Sentences break
    on ./!/? followed by whitespace or end of text. Word tokens are
    maximal letter/digit/apostrophe runs containing at least one letter.
    """
    cleaned = _URL_RE.sub(" ", text)
    cleaned = _MENTION_RE.sub(" ", cleaned)
    cleaned = cleaned.replace("#", " ")
    sentences = [part.strip() for part in _SENTENCE_SPLIT_RE.split(cleaned) if part.strip()]
    words = [tok for tok in _TOKEN_RE.findall(cleaned.lower()) if any(c.isalpha() for c in tok)]
    return sentences, words


def count_syllables(word: str) -> int:
    """Estimate syllables as vowel-group count with a silent-e adjustment.

    A trailing 'e' drops one count unless the word ends in consonant+'le'
    (where the final syllable is pronounced). Always at least 1.
    """
    if not word:
        raise ValueError("count_syllables: empty word")
    w = word.lower()
    count = len(_VOWEL_GROUP_RE.findall(w))
    consonant_le = len(w) >= 3 and w.endswith("le") and w[-3] not in _VOWELS
    if count > 1 and w.endswith("e") and not consonant_le:
        count -= 1
    return max(count, 1)


def smog_index(text: str) -> float:
    """SMOG readability grade; 0 for degenerate input with no sentences."""
    sentences, words = tokenize(text)
    if not sentences:
        return 0.0
    polysyllables = sum(1 for w in words if count_syllables(w) >= 3)
    return SMOG_COEFFICIENT * math.sqrt(polysyllables * 30.0 / len(sentences)) + SMOG_INTERCEPT


def lexical_diversity(words: Sequence[str]) -> float:
    """Type-token ratio in [0, 1]; 0 for an empty word list."""
    if not words:
        return 0.0
    return len(set(words)) / len(words)


def avg_word_length(words: Sequence[str]) -> float:
    """Mean characters per word; 0 for an empty word list."""
    if not words:
        return 0.0
    return sum(len(w) for w in words) / len(words)


def complexity(text: str, *, simple_max: float = 9.0, medium_max: float = 12.0) -> ComplexityFeatures:
    """Complexity scores plus a band derived from SMOG cutpoints."""
    _, words = tokenize(text)
    smog = smog_index(text)
    if smog < simple_max:
        band = ComplexityBand.SIMPLE
    elif smog <= medium_max:
        band = ComplexityBand.MEDIUM
    else:
        band = ComplexityBand.COMPLEX
    return ComplexityFeatures(
        smog=smog,
        lexical_diversity=lexical_diversity(words),
        avg_word_length=avg_word_length(words),
        category=band,
    )


def sentiment(
    text: str,
    lexicon: Mapping[str, tuple[float, float]],
    *,
    positive_min: float = 0.05,
    negative_max: float = -0.05,
    negators: Sequence[str] = DEFAULT_NEGATORS,
) -> PsychFeatures:
    """Mean polarity/subjectivity over lexicon hits, with negation flips.

    A negator immediately before a matched word flips that word's
    polarity sign. Texts with no lexicon hits score (0, 0, neutral).
    """
    _, words = tokenize(text)
    negator_set = set(negators)
    polarities: list[float] = []
    subjectivities: list[float] = []
    for i, tok in enumerate(words):
        entry = lexicon.get(tok)
        if entry is None:
            continue
        pol, subj = entry
        if i > 0 and words[i - 1] in negator_set:
            pol = -pol
        polarities.append(pol)
        subjectivities.append(subj)
    polarity = sum(polarities) / len(polarities) if polarities else 0.0
    subjectivity = sum(subjectivities) / len(subjectivities) if subjectivities else 0.0
    if polarity > positive_min:
        band = SentimentBand.POSITIVE
    elif polarity < negative_max:
        band = SentimentBand.NEGATIVE
    else:
        band = SentimentBand.NEUTRAL
    return PsychFeatures(polarity=polarity, subjectivity=subjectivity, category=band)


def style(
    text: str,
    *,
    personal: Sequence[str] = DEFAULT_PERSONAL_PRONOUNS,
    impersonal: Sequence[str] = DEFAULT_IMPERSONAL_PRONOUNS,
    stylic_min_personal: int = 1,
) -> StyleFeatures:
    """Count personal/impersonal pronouns; stylic when the personal count
    reaches the (configurable) minimum, one by default."""
    _, words = tokenize(text)
    personal_set = set(personal)
    impersonal_set = set(impersonal)
    n_personal = sum(1 for w in words if w in personal_set)
    n_impersonal = sum(1 for w in words if w in impersonal_set)
    band = StyleBand.STYLIC if n_personal >= stylic_min_personal else StyleBand.NONSTYLIC
    return StyleFeatures(personal_pronouns=n_personal, impersonal_pronouns=n_impersonal, category=band)


def load_lexicon(path: str | Path | None = None) -> dict[str, tuple[float, float]]:
    """Load a sentiment lexicon (TSV: word, polarity, subjectivity).

    With no path, the bundled English lexicon is returned.
    """
    if path is None:
        text = resources.files("newsdiffusion.data").joinpath("lexicon.tsv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    lexicon: dict[str, tuple[float, float]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"lexicon: expected 3 tab-separated fields, got {line!r}")
        word, polarity, subjectivity = parts
        lexicon[word.lower()] = (float(polarity), float(subjectivity))
    return lexicon


@dataclass
class TextConfig:
    """Bundle of thresholds, word lists, and the sentiment lexicon."""

    simple_max: float = 9.0
    medium_max: float = 12.0
    positive_min: float = 0.05
    negative_max: float = -0.05
    stylic_min_personal: int = 1
    negators: tuple[str, ...] = DEFAULT_NEGATORS
    personal_pronouns: tuple[str, ...] = DEFAULT_PERSONAL_PRONOUNS
    impersonal_pronouns: tuple[str, ...] = DEFAULT_IMPERSONAL_PRONOUNS
    lexicon: dict[str, tuple[float, float]] = field(default_factory=load_lexicon)


def extract_features(
    text: str, config: TextConfig | None = None
) -> tuple[ComplexityFeatures, PsychFeatures, StyleFeatures]:
    """All three feature groups for one text under one configuration."""
    cfg = config or TextConfig()
    return (
        complexity(text, simple_max=cfg.simple_max, medium_max=cfg.medium_max),
        sentiment(
            text,
            cfg.lexicon,
            positive_min=cfg.positive_min,
            negative_max=cfg.negative_max,
            negators=cfg.negators,
        ),
        style(
            text,
            personal=cfg.personal_pronouns,
            impersonal=cfg.impersonal_pronouns,
            stylic_min_personal=cfg.stylic_min_personal,
        ),
    )
