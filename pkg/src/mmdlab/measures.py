"""Finitely supported signed measures on R^d.

A :class:`SignedDiscreteMeasure` is a list of atoms (points) with real
weights.  It is the computational carrier for everything this package
manipulates: probability measures, mean-zero differences, and the signed
witnesses fed to the counterexample constructions.  Measures are immutable
after construction; every operation returns a new one.

Atom merging uses exact coordinate equality.  Constructions place atoms
deliberately, so distance-based snapping would silently change a measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .accumulate import exact_sum
from .errors import (
    DegenerateMeasureError,
    DimensionMismatchError,
    ParameterError,
)

PROBABILITY_TOL = 1e-12


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce a scalar or 1-D sequence to a finite float vector."""
    p = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if p.ndim != 1:
        raise ParameterError(f"a point must be one-dimensional, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ParameterError("point coordinates must be finite")
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {p.shape[0]}")
    return p


def as_points(pts, dim: int | None = None) -> np.ndarray:
    """Coerce input to an (n, d) array of finite coordinates.

    Accepts a single point, a flat list of 1-D points, or an (n, d) array.
    """
    arr = np.asarray(pts, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        # a flat vector is a column of 1-D points unless dim says otherwise
        arr = arr.reshape(-1, dim) if dim is not None and dim > 1 else arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ParameterError(f"points must form an (n, d) array, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ParameterError("point coordinates must be finite")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {arr.shape[1]}")
    return arr


@dataclass(frozen=True)
class SignedDiscreteMeasure:
    """A signed measure with finitely many atoms.

    Duplicate atoms are merged (weights summed) and zero-weight atoms are
    dropped at construction, so ``atoms`` are pairwise distinct and every
    stored weight is nonzero.  First occurrence determines atom order.
    """

    atoms: np.ndarray
    weights: np.ndarray
    dim: int = field(default=-1)

    def __post_init__(self):
        atoms = as_points(self.atoms, None if self.dim < 0 else self.dim)
        weights = np.asarray(self.weights, dtype=np.float64).ravel()
        if atoms.shape[0] != weights.shape[0]:
            raise ParameterError(
                f"{atoms.shape[0]} atoms but {weights.shape[0]} weights"
            )
        if weights.size and not np.all(np.isfinite(weights)):
            raise ParameterError("weights must be finite")
        dim = atoms.shape[1] if self.dim < 0 else self.dim

        merged: dict[bytes, int] = {}
        out_rows: list[np.ndarray] = []
        out_w: list[list[float]] = []
        for row, w in zip(atoms, weights):
            key = row.tobytes()
            slot = merged.get(key)
            if slot is None:
                merged[key] = len(out_rows)
                out_rows.append(row)
                out_w.append([float(w)])
            else:
                out_w[slot].append(float(w))
        summed = [exact_sum(ws) for ws in out_w]
        keep = [i for i, w in enumerate(summed) if w != 0.0]

        new_atoms = (
            np.array([out_rows[i] for i in keep], dtype=np.float64)
            if keep
            else np.empty((0, dim), dtype=np.float64)
        )
        new_weights = np.array([summed[i] for i in keep], dtype=np.float64)
        new_atoms.setflags(write=False)
        new_weights.setflags(write=False)
        object.__setattr__(self, "atoms", new_atoms)
        object.__setattr__(self, "weights", new_weights)
        object.__setattr__(self, "dim", dim)

    # -- basic queries -------------------------------------------------

    @property
    def support_size(self) -> int:
        return self.atoms.shape[0]

    @property
    def total_mass(self) -> float:
        return exact_sum(self.weights)

    @property
    def total_variation(self) -> float:
        return exact_sum(np.abs(self.weights))

    def is_probability(self, tol: float = PROBABILITY_TOL) -> bool:
        """All weights nonnegative and total mass within ``tol`` of 1."""
        if self.support_size == 0:
            return False
        return bool(np.all(self.weights >= 0.0)) and abs(self.total_mass - 1.0) <= tol

    def is_zero(self) -> bool:
        return self.support_size == 0

    # -- arithmetic (merging happens in the constructor) ----------------

    def __neg__(self) -> "SignedDiscreteMeasure":
        return SignedDiscreteMeasure(self.atoms, -self.weights, self.dim)

    def __add__(self, other: "SignedDiscreteMeasure") -> "SignedDiscreteMeasure":
        if not isinstance(other, SignedDiscreteMeasure):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"cannot add measures of dimension {self.dim} and {other.dim}"
            )
        return SignedDiscreteMeasure(
            np.concatenate([self.atoms, other.atoms], axis=0),
            np.concatenate([self.weights, other.weights]),
            self.dim,
        )

    def __sub__(self, other: "SignedDiscreteMeasure") -> "SignedDiscreteMeasure":
        return self.__add__(-other)

    def scaled(self, c: float) -> "SignedDiscreteMeasure":
        return SignedDiscreteMeasure(self.atoms, float(c) * self.weights, self.dim)

    def __repr__(self) -> str:  # keep reprs short; atoms can be large
        return (
            f"SignedDiscreteMeasure(support_size={self.support_size}, "
            f"dim={self.dim}, total_mass={self.total_mass!r})"
        )


def empty_measure(dim: int) -> SignedDiscreteMeasure:
    """The null measure on R^dim (legal; embeds to the zero function)."""
    return SignedDiscreteMeasure(np.empty((0, dim)), np.empty(0), dim)


def dirac(x, dim: int | None = None) -> SignedDiscreteMeasure:
    """Unit point mass at ``x``."""
    p = as_point(x, dim)
    return SignedDiscreteMeasure(p[None, :], np.ones(1), p.shape[0])


def jordan_decompose(
    mu: SignedDiscreteMeasure,
) -> tuple[SignedDiscreteMeasure, SignedDiscreteMeasure]:
    """Split into positive and negative parts, both with positive weights.

    ``mu == pos - neg`` holds atom-for-atom and the supports are disjoint
    (each atom carries a single signed weight after merging).
    """
    pos_mask = mu.weights > 0.0
    neg_mask = mu.weights < 0.0
    pos = SignedDiscreteMeasure(mu.atoms[pos_mask], mu.weights[pos_mask], mu.dim)
    neg = SignedDiscreteMeasure(mu.atoms[neg_mask], -mu.weights[neg_mask], mu.dim)
    return pos, neg


def normalize_positive_part(mu: SignedDiscreteMeasure) -> SignedDiscreteMeasure:
    """Rescale (negating first if needed) so the positive part has mass 1.

    After this the decomposition satisfies ``neg(X) <= pos(X) == 1``.
    Raises :class:`DegenerateMeasureError` on the zero measure.
    """
    if mu.is_zero():
        raise DegenerateMeasureError("cannot normalize the zero measure")
    pos, neg = jordan_decompose(mu)
    if neg.total_mass > pos.total_mass:
        mu = -mu
        pos, neg = neg, pos
    scale = pos.total_mass
    if scale <= 0.0:
        raise DegenerateMeasureError("measure has no positive part after orientation")
    return mu.scaled(1.0 / scale)


def mixture(
    weights: Sequence[float], parts: Sequence[SignedDiscreteMeasure]
) -> SignedDiscreteMeasure:
    """Weighted sum of measures; atoms shared between parts are merged."""
    if len(weights) != len(parts):
        raise ParameterError(
            f"{len(weights)} weights but {len(parts)} component measures"
        )
    if not parts:
        raise ParameterError("mixture needs at least one component")
    dim = parts[0].dim
    for p in parts[1:]:
        if p.dim != dim:
            raise DimensionMismatchError("mixture components must share a dimension")
    atoms = np.concatenate([p.atoms for p in parts], axis=0)
    w = np.concatenate([float(c) * p.weights for c, p in zip(weights, parts)])
    return SignedDiscreteMeasure(atoms, w, dim)


def mass_in_ball(mu: SignedDiscreteMeasure, center, radius: float) -> float:
    """Signed mass of the closed ball ``{x : |x - center| <= radius}``."""
    if radius < 0:
        raise ParameterError("radius must be nonnegative")
    if mu.support_size == 0:
        return 0.0
    c = as_point(center, mu.dim)
    dist = np.sqrt(((mu.atoms - c[None, :]) ** 2).sum(axis=1))
    return exact_sum(mu.weights[dist <= radius])


@dataclass(frozen=True)
class MeasureSequence:
    """An ordered, labelled list of measures sharing one dimension.

    ``indices`` carries the sequence index of each item (typically the n of
    a size-n construction); it defaults to 1-based positions.
    """

    items: tuple[SignedDiscreteMeasure, ...]
    label: str = ""
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise ParameterError("a measure sequence cannot be empty")
        dim = items[0].dim
        for m in items[1:]:
            if m.dim != dim:
                raise DimensionMismatchError("sequence items must share a dimension")
        indices = tuple(self.indices) or tuple(range(1, len(items) + 1))
        if len(indices) != len(items):
            raise ParameterError("indices and items must have equal length")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "indices", indices)

    @property
    def dim(self) -> int:
        return self.items[0].dim

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterable[SignedDiscreteMeasure]:
        return iter(self.items)
