"""Command-line interface: experiment runners, config files, manifests."""

from .config import ConfigError, RunManifest, csv_float, read_config
from .main import build_parser, main

__all__ = ["main", "build_parser", "ConfigError", "RunManifest",
           "csv_float", "read_config"]
