"""Experiment configuration: JSON files, kernel descriptors, measure rows.

A config file is a flat JSON object; kernel descriptors nest, e.g.::

    {
      "preset": "flaw_counterexample",
      "dim": 1,
      "n_max": 64,
      "seed": 0,
      "kernel": {"op": "shift", "c": 1.0,
                 "child": {"op": "scale",
                           "field": {"g": "c0_bump_at", "xi": [0.0]},
                           "child": {"family": "gaussian", "sigma": 1.0, "dim": 1}}}
    }

Command-line flags override file values.  Measures serialize as lists of
``[[coords...], weight]`` rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParameterError, UsageError
from .kernels import FIELD_BUILDERS, Kernel, center_kernel, make_base_kernel, scale_kernel, shift_kernel
from .measures import SignedDiscreteMeasure

PRESET_NAMES = (
    "metrize_demo",
    "escape_demo",
    "flaw_counterexample",
    "shift_invariance",
    "center_invariance",
    "compact_regime",
    "dirac_null_witness",
    "signed_witness_escape",
)


def measure_to_rows(mu: SignedDiscreteMeasure) -> list:
    return [[[float(v) for v in atom], float(w)] for atom, w in zip(mu.atoms, mu.weights)]


def measure_from_rows(rows, dim: int | None = None) -> SignedDiscreteMeasure:
    try:
        atoms = [row[0] for row in rows]
        weights = [row[1] for row in rows]
    except (TypeError, IndexError) as exc:
        raise ParameterError(f"malformed measure rows: {exc}") from exc
    if not atoms:
        if dim is None:
            raise ParameterError("an empty measure needs an explicit dimension")
        return SignedDiscreteMeasure(np.empty((0, dim)), np.empty(0), dim)
    return SignedDiscreteMeasure(np.asarray(atoms, dtype=np.float64), weights, dim or -1)


def field_from_descriptor(desc: dict):
    name = desc.get("g")
    builder = FIELD_BUILDERS.get(name)
    if builder is None:
        raise ParameterError(f"unknown scalar field {name!r}")
    if name == "c0_null_at":
        return builder(desc["xis"])
    return builder(desc["xi"])


def kernel_from_descriptor(desc: dict) -> Kernel:
    """Rebuild a kernel from its (possibly nested) descriptor."""
    if not isinstance(desc, dict):
        raise ParameterError("kernel descriptor must be a mapping")
    if "family" in desc:
        params = {k: v for k, v in desc.items() if k not in ("family", "dim")}
        return make_base_kernel(desc["family"], dim=int(desc.get("dim", 1)), **params)
    op = desc.get("op")
    if op == "shift":
        return shift_kernel(kernel_from_descriptor(desc["child"]), desc.get("c", 0.0))
    if op == "scale":
        child = kernel_from_descriptor(desc["child"])
        # the field may be nested under "field" or spelled inline (g/xi keys)
        field_desc = desc.get("field") or {
            k: v for k, v in desc.items() if k in ("g", "xi", "xis")
        }
        return scale_kernel(child, field_from_descriptor(field_desc))
    if op == "center":
        child = kernel_from_descriptor(desc["child"])
        p = measure_from_rows(desc.get("p", []), child.dim)
        return center_kernel(child, p, desc.get("a", 0.0))
    raise ParameterError(f"unrecognized kernel descriptor: {desc!r}")


@dataclass
class ExperimentConfig:
    """Validated inputs of one experiment run."""

    preset: str
    dim: int = 1
    n_max: int = 64
    seed: int = 0
    out: str = ""
    kernel: dict | None = None
    thresholds: dict = field(default_factory=dict)
    radii: tuple[float, ...] = (2.0, 4.0, 8.0)
    xi: tuple[float, ...] | None = None
    xi2: tuple[float, ...] | None = None
    pairs: int = 100
    strategy: str = "ray"
    scaler: str = "c0_bump_at"

    def __post_init__(self):
        if self.preset not in PRESET_NAMES:
            raise UsageError(
                f"unknown preset {self.preset!r}; available: {', '.join(PRESET_NAMES)}"
            )
        if self.n_max < 2:
            raise UsageError("n_max must be at least 2")
        if self.dim < 1:
            raise UsageError("dim must be at least 1")
        if self.pairs < 1:
            raise UsageError("pairs must be at least 1")
        if self.strategy not in ("ray", "grid", "random"):
            raise UsageError(f"unknown search strategy {self.strategy!r}")
        if not self.out:
            self.out = str(Path("out") / self.preset)

    def make_kernel(self) -> Kernel:
        """The configured kernel, defaulting to a unit-bandwidth gaussian."""
        desc = self.kernel or {"family": "gaussian", "sigma": 1.0, "dim": self.dim}
        try:
            k = kernel_from_descriptor(desc)
        except (ParameterError, KeyError, TypeError) as exc:
            raise UsageError(f"bad kernel descriptor: {exc}") from exc
        if k.dim != self.dim:
            raise UsageError(
                f"kernel dimension {k.dim} does not match experiment dim {self.dim}"
            )
        return k

    def xi_point(self) -> np.ndarray:
        if self.xi is None:
            return np.zeros(self.dim)
        p = np.asarray(self.xi, dtype=np.float64)
        if p.shape != (self.dim,):
            raise UsageError(f"xi must have {self.dim} coordinates")
        return p


_CONFIG_KEYS = {
    "preset",
    "dim",
    "n_max",
    "seed",
    "out",
    "kernel",
    "thresholds",
    "radii",
    "xi",
    "xi2",
    "pairs",
    "strategy",
    "scaler",
}


def load_config_file(path) -> dict:
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except FileNotFoundError:
        raise UsageError(f"config file not found: {p}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {p} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return raw


def build_config(file_values: dict | None = None, **overrides) -> ExperimentConfig:
    """Merge file values and flag overrides (flags win) into a config."""
    merged: dict = dict(file_values or {})
    for key, val in overrides.items():
        if val is not None:
            merged[key] = val
    if "preset" not in merged:
        raise UsageError("a preset is required (config file or --preset)")
    for key in ("radii", "xi", "xi2"):
        if merged.get(key) is not None:
            merged[key] = tuple(float(v) for v in merged[key])
    try:
        return ExperimentConfig(**merged)
    except TypeError as exc:
        raise UsageError(f"bad configuration: {exc}") from exc
