"""Flat key=value configuration files and run manifests.

Config files are UTF-8 text, one `key=value` per line, `#` comments;
every key is also a command-line flag and flags override the file.
Each run emits a JSON manifest echoing the configuration, the RNG
algorithm, wall-clock time, bias reports and checksums of all emitted
files, so identical inputs are verifiably reproducible.
"""

from __future__ import annotations

import hashlib
import json
import time

from .. import __version__
from ..errors import LoopSoupError

__all__ = ["ConfigError", "read_config", "RunManifest", "csv_float"]


class ConfigError(LoopSoupError):
    """Raised for malformed configuration files or invalid values."""


def read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def csv_float(x) -> str:
    """17 significant digits: round-trip exact for doubles."""
    return format(float(x), ".17g")


class RunManifest:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.started = time.time()
        self.files: list[str] = []
        self.bias: dict = {}

    def add_file(self, path: str):
        self.files.append(path)

    def add_bias(self, key: str, value):
        self.bias[key] = value

    def write(self, path: str):
        checksums = {}
        for f in self.files:
            h = hashlib.sha256()
            with open(f, "rb") as fh:
                h.update(fh.read())
            checksums[f] = h.hexdigest()
        payload = {
            "command": self.command,
            "config": {k: str(v) for k, v in self.config.items()},
            "artifact_version": __version__,
            "rng_algorithm": "numpy PCG64 (default_rng)",
            "wall_clock_seconds": time.time() - self.started,
            "bias_reports": self.bias,
            "checksums": checksums,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, default=float)
        return path
