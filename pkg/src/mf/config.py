"""Pipeline configuration: flat key=value files with CLI-flag overrides."""

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Union

from .errors import ConfigError

_PATH_KEYS = ("corpus", "rules", "taxonomy", "topic_matrix",
              "expansion_table", "gold", "sidecar")
_INT_KEYS = ("min_freq", "k", "top_sources", "top_cms", "per_pair",
             "top_patterns", "seed", "topics")


@dataclass
class PipelineConfig:
    corpus: Optional[str] = None
    rules: Optional[str] = None
    taxonomy: Optional[str] = None
    topic_matrix: Optional[str] = None
    expansion_table: Optional[str] = None
    gold: Optional[str] = None
    sidecar: Optional[str] = None
    workdir: str = "out"
    targets: tuple[str, ...] = ()
    min_freq: int = 1
    threshold: float = 0.04
    k: int = 5
    top_sources: int = 100
    top_cms: int = 10
    per_pair: int = 10
    top_patterns: int = 10
    topics: int = 50
    seed: int = 1
    generalize: bool = True

    def validate(self) -> "PipelineConfig":
        for key in _INT_KEYS:
            if getattr(self, key) < 1:
                raise ConfigError("must be strictly positive", key)
        if self.threshold < 0:
            raise ConfigError("must be >= 0", "threshold")
        return self


def _parse_bool(value: str, key: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}", key)


def load_config(source: Union[str, Path], base: Optional[PipelineConfig] = None,
                ) -> PipelineConfig:
    """Read key=value lines; '#' comments and blank lines are skipped.

    Unknown keys and malformed values raise ConfigError naming the field.
    """
    cfg = base if base is not None else PipelineConfig()
    known = {f.name for f in fields(PipelineConfig)}
    path = Path(source)
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(),
                                  start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"expected key=value on line {lineno}", key or line)
        if key not in known:
            raise ConfigError("unknown configuration key", key)
        if key in _INT_KEYS:
            try:
                setattr(cfg, key, int(value))
            except ValueError:
                raise ConfigError(f"expected an integer, got {value!r}", key) from None
        elif key == "threshold":
            try:
                cfg.threshold = float(value)
            except ValueError:
                raise ConfigError(f"expected a number, got {value!r}", key) from None
        elif key == "generalize":
            cfg.generalize = _parse_bool(value, key)
        elif key == "targets":
            cfg.targets = tuple(t.strip() for t in value.split(",") if t.strip())
        else:
            setattr(cfg, key, value or None)
    return cfg.validate()
