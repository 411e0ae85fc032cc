"""Pipeline configuration: a single JSON file with documented keys.

Input paths may use the ``pkg:`` prefix to reference files bundled with
the package (e.g. ``pkg:sample/claims.csv``). Validation names the
offending key on every failure, and the resolved configuration is
hashed so artifacts can be traced back to the run that produced them.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any


class ConfigError(Exception):
    """Invalid or incomplete pipeline configuration."""


DEFAULT_CLASSIFIERS: dict[str, dict] = {
    "decision_tree": {"max_depth": 8},
    "random_forest": {"n_trees": 30, "max_depth": None},
    "gbdt": {"n_estimators": 60, "learning_rate": 0.1, "max_depth": 3, "n_bins": 32},
    "logistic_regression": {"l2_lambda": 1e-3, "learning_rate": 0.2, "n_epochs": 400},
    "linear_svm": {"reg_lambda": 1e-4, "n_epochs": 30},
}

DEFAULT_REGRESSORS: dict[str, dict] = {
    "random_forest_regressor": {"n_trees": 30, "max_depth": None},
    "gbdt_regressor": {"n_estimators": 80, "learning_rate": 0.1, "max_depth": 3, "n_bins": 32},
}

_DEFAULTS: dict[str, Any] = {
    "mapping": None,
    "lexicon_path": None,
    "text": {
        "simple_max": 9.0,
        "medium_max": 12.0,
        "positive_min": 0.05,
        "negative_max": -0.05,
        "stylic_min_personal": 1,
        "negators": None,
        "personal_pronouns": None,
        "impersonal_pronouns": None,
    },
    "tlda": {
        "n_topics": 10,
        "alpha": None,
        "beta": 0.01,
        "gamma": 20.0,
        "n_sweeps": 500,
        "min_count": 5,
    },
    "labeling": {"mode": "retweet_threshold", "tau": None, "edges_path": None},
    "split": {"test_fraction": 0.25, "stratified": True},
    "models": {"classifiers": DEFAULT_CLASSIFIERS, "regressors": DEFAULT_REGRESSORS},
    "spread": {"model": "random_forest", "like_count": 0},
}

_REQUIRED_KEYS = ("claims_path", "propagation_path", "users_path", "seed", "out_dir")
_KNOWN_KEYS = set(_REQUIRED_KEYS) | set(_DEFAULTS)


def resolve_path(value: str) -> Path:
    """Resolve a config path; the pkg: prefix points into bundled data."""
    if value.startswith("pkg:"):
        return Path(str(resources.files("newsdiffusion.data").joinpath(value[4:])))
    return Path(value)


def _merge_defaults(section: Any, defaults: Any) -> Any:
    if isinstance(defaults, dict) and isinstance(section, dict):
        merged = copy.deepcopy(defaults)
        merged.update({k: _merge_defaults(v, defaults.get(k)) for k, v in section.items()})
        return merged
    return copy.deepcopy(section)


@dataclass
class PipelineConfig:
    raw: dict[str, Any]

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        unknown = set(data) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        for key in _REQUIRED_KEYS:
            if key not in data:
                raise ConfigError(f"missing required config key: {key!r}")
        merged = {key: copy.deepcopy(data[key]) for key in _REQUIRED_KEYS}
        for key, default in _DEFAULTS.items():
            merged[key] = _merge_defaults(data.get(key, default), default)
        config = cls(raw=merged)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def validate(self) -> None:
        if not isinstance(self.raw["seed"], int):
            raise ConfigError("config key 'seed' must be an integer")
        for key in ("claims_path", "propagation_path", "users_path"):
            if not resolve_path(str(self.raw[key])).exists():
                raise ConfigError(f"config key {key!r}: path does not exist ({self.raw[key]})")
        lexicon = self.raw.get("lexicon_path")
        if lexicon is not None and not resolve_path(str(lexicon)).exists():
            raise ConfigError(f"config key 'lexicon_path': path does not exist ({lexicon})")
        edges = self.raw["labeling"].get("edges_path")
        if edges is not None and not resolve_path(str(edges)).exists():
            raise ConfigError(f"config key 'labeling.edges_path': path does not exist ({edges})")
        mode = self.raw["labeling"]["mode"]
        if mode not in ("retweet_threshold", "follower_evidence"):
            raise ConfigError(f"config key 'labeling.mode': unknown mode {mode!r}")

    # convenient accessors -------------------------------------------------
    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def out_dir(self) -> Path:
        return Path(self.raw["out_dir"])

    def path(self, key: str) -> Path:
        return resolve_path(str(self.raw[key]))

    def __getitem__(self, key: str) -> Any:
        return self.raw[key]

    @property
    def sha256(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def sample_config(out_dir: str | Path, seed: int = 42) -> PipelineConfig:
    """Ready-to-run configuration for the bundled synthetic sample."""
    return PipelineConfig.from_dict(
        {
            "claims_path": "pkg:sample/claims.csv",
            "propagation_path": "pkg:sample/propagation.csv",
            "users_path": "pkg:sample/users.csv",
            "seed": seed,
            "out_dir": str(out_dir),
            "tlda": {"n_topics": 2, "n_sweeps": 120, "min_count": 3},
        }
    )
