"""Pipeline configuration and the flat ``key = value`` config file format.

Command-line flags override file values, which override the defaults
below. The file format is deliberately plain text: one assignment per
line, ``#`` starts a comment line, keys named exactly like the flags.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ParameterError

METHODS = ("kmeans", "cs_sc", "lasso_ssc", "omp_ssc")

TAU_PRESETS = {"dba": 0.8, "c57": 0.7}


def parse_tau(value) -> float:
    """A tau flag value: a float in (-1, 1] or a strain preset name."""
    if isinstance(value, str):
        key = value.strip().lower()
        if key in TAU_PRESETS:
            return TAU_PRESETS[key]
        try:
            value = float(key)
        except ValueError:
            raise ParameterError(
                f"tau must be a number or one of {sorted(TAU_PRESETS)}, got {value!r}"
            ) from None
    value = float(value)
    if not -1.0 < value <= 1.0:
        raise ParameterError(f"tau must lie in (-1, 1], got {value}")
    return value


def parse_k(value) -> tuple[int, ...]:
    """A k flag value: an int or a comma-separated list of ints."""
    if isinstance(value, int):
        return (value,)
    if isinstance(value, (tuple, list)):
        return tuple(int(v) for v in value)
    try:
        ks = tuple(int(part) for part in str(value).split(","))
    except ValueError:
        raise ParameterError(f"k must be an int or comma list, got {value!r}") from None
    if not ks:
        raise ParameterError("k list is empty")
    return ks


def _parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    key = str(value).strip().lower()
    if key in ("true", "1", "yes"):
        return True
    if key in ("false", "0", "no"):
        return False
    raise ParameterError(f"expected a boolean, got {value!r}")


@dataclass
class PipelineConfig:
    """Everything a pipeline run depends on.

    ``lam`` is spelled ``lambda`` in config files and on the command line;
    the Python keyword forces the shorter attribute name.
    """

    input: str = ""
    output_dir: str = ""
    method: str = "lasso_ssc"
    k: tuple[int, ...] = (20, 40, 60)
    tau: float = 0.8
    lam: float = 0.3
    denoise_eps: float = 0.001
    f: int = 64
    t: int = 64
    seed: int = 0
    export_embedding: bool = False
    sparsity_k: int = 10
    max_iter: int = 1000
    tol: float = 1e-7
    dump_coefficients: bool = False

    def __post_init__(self):
        self.k = parse_k(self.k)
        self.tau = parse_tau(self.tau)
        if not self.input:
            raise ParameterError("input path is required")
        if not self.output_dir:
            raise ParameterError("output_dir is required")
        if self.method not in METHODS:
            raise ParameterError(
                f"method must be one of {METHODS}, got {self.method!r}"
            )
        for kk in self.k:
            if kk < 1:
                raise ParameterError(f"k values must be >= 1, got {kk}")
        if self.lam <= 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if self.denoise_eps < 0:
            raise ParameterError(f"denoise_eps must be >= 0, got {self.denoise_eps}")
        if self.f < 2 or self.t < 2:
            raise ParameterError(f"f and t must be >= 2, got {self.f}x{self.t}")
        if self.sparsity_k < 1:
            raise ParameterError(f"sparsity_k must be >= 1, got {self.sparsity_k}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol <= 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")


# how each config key is coerced; "lambda" is the external spelling of lam
_COERCERS = {
    "input": str,
    "output_dir": str,
    "method": str,
    "k": parse_k,
    "tau": parse_tau,
    "lambda": float,
    "denoise_eps": float,
    "f": int,
    "t": int,
    "seed": int,
    "export_embedding": _parse_bool,
    "sparsity_k": int,
    "max_iter": int,
    "tol": float,
    "dump_coefficients": _parse_bool,
}

_KEY_TO_FIELD = {key: ("lam" if key == "lambda" else key) for key in _COERCERS}


def read_config_file(path) -> dict:
    """Parse a flat config file into {field_name: coerced_value}."""
    path = Path(path)
    if not path.exists():
        raise ParameterError(f"config file not found: {path}")
    values = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _COERCERS:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[_KEY_TO_FIELD[key]] = _COERCERS[key](val)
        except ParameterError:
            raise
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values


def build_config(file_values: dict | None = None, flag_values: dict | None = None) -> PipelineConfig:
    """Merge defaults <- config file <- flags into a validated config."""
    merged: dict = {}
    if file_values:
        merged.update(file_values)
    if flag_values:
        merged.update({k: v for k, v in flag_values.items() if v is not None})
    names = {fld.name for fld in fields(PipelineConfig)}
    unknown = set(merged) - names
    if unknown:
        raise ParameterError(f"unknown config fields: {sorted(unknown)}")
    return PipelineConfig(**merged)
