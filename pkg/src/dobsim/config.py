"""Flat key-value configuration files.

Format: one ``key = value`` pair per line, ``#`` starts a comment.
Values are parsed as bool ("true"/"false"), int, or float where possible
and kept as strings otherwise.
"""

from __future__ import annotations

import os

from .errors import ConfigError, IOFailureError

# Every key any module understands.  Unknown keys are rejected so typos
# do not silently fall back to defaults.
KNOWN_KEYS = frozenset(
    [
        # physical parameters
        "mass", "arm", "gravity", "jx", "jy", "jz", "kf", "km", "dt",
        # backstepping gains
        "k1", "k2", "k3", "k4", "k5", "k6", "kz_p", "kz_d",
        # disturbance observer
        "dob_enabled", "d_rolloff_rad_s", "estimate_sat",
        # scenario
        "duration", "t_grasp", "t_release", "hover_wait_s",
        "n_classes", "base_plateau_n",
        # learning filter
        "l_taps",
    ]
)


def _parse_value(raw: str):
    text = raw.strip()
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_text(text: str, source: str = "<string>") -> dict:
    """Parse config text into a {key: value} dict, validating key names."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip().lower()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = _parse_value(raw)
    return out


def load_config(path: str | os.PathLike) -> dict:
    """Load a flat key-value config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IOFailureError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))
