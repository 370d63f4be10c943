"""Toolkit configuration: one key=value per line, '#' starts a comment.

Every learner threshold and toggle has an explicit default here; the
shipped example config lists them all.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

from .errors import ConfigError


@dataclass
class Config:
    # learner thresholds
    min_coverage: float = 0.8
    min_precision: float = 0.5
    min_members: int = 3
    min_freq: int = 3
    cohesion: float = 0.5
    window: int = 2
    max_n: int = 3
    generalization_levels: int = 3
    concept_rule_unit: str = "token"  # "token" for spaced text, "char" for unspaced
    # discovery toggles
    enable_concept_rules: bool = True
    enable_new_concepts: bool = True
    enable_concept_features: bool = True
    enable_phrase_trigram: bool = True
    enable_phrase_cooccur: bool = True
    enable_subsentence: bool = True
    # parser limits (exhaustive mode)
    exhaustive_max_elements: int = 10
    exhaustive_max_derivations: int = 10000
    # text-handling extensions, applied process-wide at startup
    extra_pos_tags: str = ""  # comma-separated additions to the tag set
    extra_delimiters: str = ""  # characters added to the subsentence delimiters


_BOOL_VALUES = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def load_config(path: str | None) -> Config:
    """Parse a config file; None yields all defaults."""
    cfg = Config()
    if path is None:
        return cfg
    if not os.path.isfile(path):
        raise ConfigError(f"missing config file: {path}")
    types = {f.name: f.type for f in fields(Config)}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            if key not in types:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                setattr(cfg, key, _coerce(types[key], value))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
    if cfg.concept_rule_unit not in ("char", "token"):
        raise ConfigError(f"concept_rule_unit must be 'char' or 'token', got {cfg.concept_rule_unit!r}")
    for tag in _extra_tags(cfg):
        if not tag.isalnum():
            raise ConfigError(f"extra pos tag {tag!r} must be alphanumeric")
    return cfg


def _extra_tags(cfg: Config) -> list[str]:
    return [t.strip() for t in cfg.extra_pos_tags.split(",") if t.strip()]


def apply_text_extensions(cfg: Config) -> None:
    """Extend the process-wide tag and delimiter sets from the config.

    Alphanumeric-only tags keep parse_str joins and feature encodings
    unambiguous. Extensions are additive; nothing is ever removed.
    """
    from . import tags

    tags.POS_TAGS.update(_extra_tags(cfg))
    tags.DELIMITERS.update(cfg.extra_delimiters)


def _coerce(type_name: str, value: str):
    if type_name == "bool":
        if value.lower() not in _BOOL_VALUES:
            raise ValueError(f"expected a boolean, got {value!r}")
        return _BOOL_VALUES[value.lower()]
    if type_name == "int":
        return int(value)
    if type_name == "float":
        return float(value)
    return value
