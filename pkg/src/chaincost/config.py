"""Strict JSON configuration for chains and uniform descriptions.

The chain schema:

    {
      "n": 50,                      // stage count (required with "uniform")
      "X0": 1000000,
      "alpha": 0.5,
      "beta": 1.0,
      "uniform": {"d": 0.02, "em": 0.8, ...}   // or "stages": [{...}, ...]
    }

Stage records accept the keys d, em, ei, c, m, i, C, M, I; omitted keys
default to 0. Unknown keys are rejected everywhere rather than ignored, so
typos fail loudly instead of silently zeroing a cost.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .chain import Chain, Reputation, StageParams
from .errors import ConfigError
from .homogenize import HomogenizedChain

__all__ = [
    "load_config",
    "parse_config",
    "chain_to_config",
    "config_sha256",
    "homogenized_to_dict",
    "homogenized_from_dict",
]

_STAGE_KEYS = ("d", "em", "ei", "c", "m", "i", "C", "M", "I")
_TOP_KEYS = {"n", "X0", "alpha", "beta", "stages", "uniform"}
_H_KEYS = ("N", "d", "em", "ei", "c", "m", "i", "C", "M", "I", "X0", "alpha", "beta", "n_source")


def _number(obj: object, where: str) -> float:
    # bool is an int subclass; a config saying "d": true is a mistake.
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(f"{where} must be a number, got {obj!r}")
    return float(obj)


def _stage(record: object, where: str) -> StageParams:
    if not isinstance(record, dict):
        raise ConfigError(f"{where} must be an object, got {type(record).__name__}")
    unknown = set(record) - set(_STAGE_KEYS)
    if unknown:
        raise ConfigError(f"{where} has unknown keys: {sorted(unknown)}")
    values = {k: _number(record[k], f"{where}.{k}") if k in record else 0.0 for k in _STAGE_KEYS}
    try:
        return StageParams(**values)
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from None


def parse_config(obj: object) -> Chain:
    """Build a chain from a parsed JSON object, rejecting anything off-schema."""
    if not isinstance(obj, dict):
        raise ConfigError(f"config must be a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"config has unknown keys: {sorted(unknown)}")
    if ("stages" in obj) == ("uniform" in obj):
        raise ConfigError("config needs exactly one of 'stages' or 'uniform'")
    for key in ("X0", "alpha", "beta"):
        if key not in obj:
            raise ConfigError(f"config is missing required key '{key}'")

    X0 = _number(obj["X0"], "X0")
    alpha = _number(obj["alpha"], "alpha")
    beta = _number(obj["beta"], "beta")
    try:
        reputation = Reputation(alpha=alpha, beta=beta)
    except ValueError as e:
        raise ConfigError(str(e)) from None

    if "uniform" in obj:
        if "n" not in obj:
            raise ConfigError("config with 'uniform' needs 'n'")
        n = obj["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ConfigError(f"n must be an integer, got {n!r}")
        stage = _stage(obj["uniform"], "uniform")
        try:
            return Chain.uniform(n=n, stage=stage, X0=X0, reputation=reputation)
        except ValueError as e:
            raise ConfigError(str(e)) from None

    records = obj["stages"]
    if not isinstance(records, list) or not records:
        raise ConfigError("'stages' must be a non-empty array")
    if "n" in obj and obj["n"] != len(records):
        raise ConfigError(f"n = {obj['n']!r} does not match the {len(records)} stage records")
    stages = tuple(_stage(rec, f"stages[{k}]") for k, rec in enumerate(records))
    try:
        return Chain(stages=stages, X0=X0, reputation=reputation)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def load_config(path: str | Path) -> Chain:
    """Read and parse a chain config file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    return parse_config(obj)


def chain_to_config(chain: Chain) -> dict:
    """Canonical JSON-ready form of a chain (round-trips through parse_config)."""
    return {
        "n": chain.n,
        "X0": chain.X0,
        "alpha": chain.reputation.alpha,
        "beta": chain.reputation.beta,
        "stages": [
            {k: getattr(s, k) for k in _STAGE_KEYS} for s in chain.stages
        ],
    }


def config_sha256(obj: dict) -> str:
    """Short content hash of a JSON-able object, for provenance headers."""
    canonical = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def homogenized_to_dict(h: HomogenizedChain) -> dict:
    """JSON-ready form of a uniform description (see homogenized_from_dict)."""
    out = {k: getattr(h, k) for k in _H_KEYS if k not in ("alpha", "beta")}
    out["alpha"] = h.reputation.alpha
    out["beta"] = h.reputation.beta
    return out


def homogenized_from_dict(obj: object) -> HomogenizedChain:
    """Parse a uniform description record; the inverse of homogenized_to_dict.

    A 'provenance' key is tolerated (the CLI adds one on output) but
    anything else off-schema is rejected.
    """
    if not isinstance(obj, dict):
        raise ConfigError(f"description must be a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - set(_H_KEYS) - {"provenance"}
    if unknown:
        raise ConfigError(f"description has unknown keys: {sorted(unknown)}")
    missing = [k for k in _H_KEYS if k not in obj]
    if missing:
        raise ConfigError(f"description is missing keys: {missing}")
    for key in ("N", "n_source"):
        val = obj[key]
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"{key} must be an integer, got {val!r}")
    n_source = obj["n_source"]
    values = {k: _number(obj[k], k) for k in _H_KEYS if k not in ("N", "alpha", "beta", "n_source")}
    values["N"] = obj["N"]
    try:
        reputation = Reputation(
            alpha=_number(obj["alpha"], "alpha"), beta=_number(obj["beta"], "beta")
        )
        return HomogenizedChain(reputation=reputation, n_source=n_source, **values)
    except ValueError as e:
        raise ConfigError(str(e)) from None
