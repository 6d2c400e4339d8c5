"""Run configuration: ``key = value`` text files with ``#`` comments, overridden by flags."""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path

from .fields import FieldCtx
from .mollifier import IntervalSchedule

_SECTION = "run"


@dataclass
class RunConfig:
    q: int = 5
    g: list[int] = field(default_factory=lambda: [2])
    kind: str = "first"
    mode: str = "desk"
    J: int = 2
    theta_J: float = 0.5
    b: float = 0.91
    kappa: float = 1.0
    k: float = 1.0
    cache_dir: str | None = None
    threads: int = 1
    seed: int = 0
    out: str | None = None
    format: str = "json"

    def validate(self) -> "RunConfig":
        FieldCtx(self.q)  # raises for invalid q
        for g in self.g:
            if g < 0 or g % 2:
                raise ValueError(f"genus {g} must be even and non-negative")
        if self.format not in ("json", "tsv"):
            raise ValueError(f"unknown output format {self.format!r}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        for g in self.g:
            self.schedule(g)
        return self

    def schedule(self, g: int) -> IntervalSchedule:
        if self.mode == "desk":
            return IntervalSchedule.desk(g, theta_J=self.theta_J, J=self.J, b=self.b, kappa=self.kappa)
        if self.mode == "paper":
            return IntervalSchedule.paper(g, theta_J=self.theta_J, b=self.b, kappa=self.kappa)
        if self.mode == "empty":
            return IntervalSchedule.empty(g)
        raise ValueError(f"unknown schedule mode {self.mode!r}")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, value: str):
    t = _TYPES[key]
    if key == "g":
        return [int(x) for x in value.replace(",", " ").split()]
    if t == "int":
        return int(value)
    if t == "float":
        return float(value)
    if value.lower() in ("", "none"):
        return None
    return value


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; unknown keys raise."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",))
    cp.optionxform = str
    cp.read_string(f"[{_SECTION}]\n" + text)
    out = {}
    for key, value in cp[_SECTION].items():
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = _convert(key, value.strip())
    return out


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    """File values first, then every non-None override."""
    values = parse_config(Path(path).read_text()) if path else {}
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v
    return RunConfig(**values).validate()


def dump_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        lines.append(f"{f.name} = {' '.join(map(str, v)) if isinstance(v, list) else v}")
    return "\n".join(lines) + "\n"
