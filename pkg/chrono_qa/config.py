"""
Pipeline configuration. Defaults point at the data files bundled with the
package, so ``PipelineConfig()`` runs the toy KB out of the box.
"""

import argparse
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .constants import (DEFAULT_KB_PATH, DEFAULT_LEXICON_PATH,
                        DEFAULT_ORDINALS_PATH, DEFAULT_REFERENCE_DATE,
                        DEFAULT_RELATIONS_PATH, DEFAULT_SIGNALS_PATH)
from .errors import ConfigurationError
from .model import Granularity, TimePoint


@dataclass(frozen=True)
class PipelineConfig:
    kb_path: Path = DEFAULT_KB_PATH
    embeddings_path: Optional[Path] = None
    reference_date: str = DEFAULT_REFERENCE_DATE
    signals_path: Path = DEFAULT_SIGNALS_PATH
    ordinals_path: Path = DEFAULT_ORDINALS_PATH
    lexicon_path: Path = DEFAULT_LEXICON_PATH
    relations_path: Path = DEFAULT_RELATIONS_PATH
    backend: str = "builtin"
    workers: int = 1

    def validate(self) -> "PipelineConfig":
        """Check the configuration and return it.

        Raises:
            ConfigurationError: On missing files, a reference date that is
                not a valid ``YYYY-MM-DD`` day, a malformed backend selector
                or fewer than one worker.
        """
        for name in ("kb_path", "embeddings_path", "signals_path",
                     "ordinals_path", "lexicon_path", "relations_path"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise ConfigurationError(f"{name.replace('_', ' ')} not "
                                         f"found: {path}")
        self.reference_point()
        if self.backend != "builtin" and not (
                self.backend.startswith("cmd:") and self.backend[4:].strip()):
            raise ConfigurationError(f"unknown backend {self.backend!r}, "
                                     f"expected 'builtin' or 'cmd:<command>'")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got "
                                     f"{self.workers}")
        return self

    def reference_point(self) -> TimePoint:
        try:
            point = TimePoint.parse(self.reference_date)
        except ValueError as e:
            raise ConfigurationError(f"invalid reference date: {e}") from e
        if point.granularity is not Granularity.DAY:
            raise ConfigurationError(f"reference date must be a day, got "
                                     f"{self.reference_date!r}")
        return point

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "PipelineConfig":
        """Build a config from parsed CLI flags; flags left unset (None) keep
        their defaults."""
        values = {}
        for field in fields(cls):
            value = getattr(args, field.name, None)
            if value is None:
                continue
            if field.name.endswith("_path"):
                value = Path(value)
            values[field.name] = value
        return cls(**values)
