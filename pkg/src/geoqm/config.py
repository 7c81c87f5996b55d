"""Run configuration, deterministic output writers, and thread caps.

The CLI keeps its plumbing here so the numerical modules stay out of the
import path: nothing in this module imports numpy, which lets the thread
cap land before any BLAS pool spins up.
"""

from __future__ import annotations

import dataclasses
import json
import numbers
import os
import sys
from typing import Any, IO, Iterable, Mapping, MutableMapping, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

THREAD_ENV_VAR = "GEOQM_THREADS"

# The usual knobs read by OpenMP and the BLAS backends at library load time.
_POOL_ENV_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def apply_thread_cap(env: MutableMapping[str, str] | None = None) -> int | None:
    """Cap worker pools from GEOQM_THREADS, returning the cap if one is set.

    Only effective when it runs before numpy is first imported; the package
    root calls it at import time for exactly that reason.
    """
    if env is None:
        env = os.environ
    raw = env.get(THREAD_ENV_VAR)
    if raw is None:
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{THREAD_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{THREAD_ENV_VAR} must be >= 1, got {cap}")
    for var in _POOL_ENV_VARS:
        env[var] = str(cap)
    return cap


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Settings shared by every subcommand.

    Parseable from a TOML file and from flags; flag values override file
    values (see :meth:`with_overrides`). Unknown top-level tables are kept
    as per-subcommand parameter maps.
    """

    hbar: float = 1.0
    seed: int = 0
    out: str | None = None
    tolerances: Mapping[str, float] = dataclasses.field(default_factory=dict)
    params: Mapping[str, Mapping[str, Any]] = dataclasses.field(default_factory=dict)
    source: str | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.hbar, numbers.Real) and self.hbar > 0):
            raise ValueError(f"hbar must be a positive real, got {self.hbar!r}")
        if not isinstance(self.seed, numbers.Integral):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        object.__setattr__(self, "hbar", float(self.hbar))
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        scalars = {k: data[k] for k in ("hbar", "seed", "out") if k in data}
        tables = {k: v for k, v in data.items()
                  if isinstance(v, dict) and k != "tolerances"}
        return cls(tolerances=dict(data.get("tolerances", {})),
                   params=tables, source=str(path), **scalars)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """A copy where the non-None overrides (CLI flags) win."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **updates) if updates else self

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def param(self, section: str, name: str, default: Any = None) -> Any:
        return self.params.get(section, {}).get(name, default)

    def echo(self) -> dict[str, Any]:
        """The effective settings, for embedding in JSON summaries."""
        doc: dict[str, Any] = {"hbar": self.hbar, "seed": self.seed}
        if self.out is not None:
            doc["out"] = self.out
        if self.tolerances:
            doc["tolerances"] = dict(self.tolerances)
        if self.source is not None:
            doc["config_file"] = self.source
        return doc


def format_cell(value: Any) -> str:
    """One CSV cell: ints verbatim, reals to 17 significant digits."""
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return format(float(value), ".17g")
    raise TypeError(f"cannot format a {type(value).__name__} CSV cell")


def write_csv(target: str | IO[str] | None,
              header: Sequence[str],
              rows: Iterable[Sequence[Any]]) -> None:
    """CSV with a header row, newline endings, 17 significant digits.

    ``target`` is a path, an open text handle, or None for stdout. The
    output is byte-identical for identical inputs: fixed separators, fixed
    float formatting, no trailing whitespace.
    """
    chunks = [",".join(header)]
    chunks.extend(",".join(format_cell(v) for v in row) for row in rows)
    text = "\n".join(chunks) + "\n"
    if target is None:
        sys.stdout.write(text)
    elif hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", newline="") as fh:
            fh.write(text)


def _json_default(value: Any) -> Any:
    if hasattr(value, "item"):  # numpy scalars, without importing numpy here
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def json_summary(subcommand: str, payload: Mapping[str, Any],
                 config: RunConfig) -> str:
    """JSON document carrying the tool version and the effective config."""
    from geoqm import __version__

    doc = {"tool": "geoqm", "version": __version__,
           "subcommand": subcommand, "config": config.echo()}
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default)
