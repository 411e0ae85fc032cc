"""Modeling how news items are shared and spread through a social network:
typed corpus ingestion, text and social feature extraction, per-user topic
modeling, share classification, retweet regression, and single-level
spread estimation."""

__version__ = "0.1.0"

from . import corpus, metrics, ml, social, textfeat, topics

__all__ = ["corpus", "textfeat", "topics", "social", "ml", "metrics", "__version__"]
