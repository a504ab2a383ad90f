"""Constructive sequences and counterexample kernels.

Three constructions live here.

* :func:`diffusing_sequence` greedily builds a uniform probability measure
  on n points that all avoid an exclusion ball and have pairwise-small
  kernel values, so its embedding norm is at most sup/n + (n-1) eps / n.
  Pushing eps = 1/n drives the norm to zero while the mass marches off to
  infinity.

* :func:`escape_sequence` turns a kernel-annihilated signed measure
  (a "witness": |mu| = 0 under k) into a sequence of probability measures
  mu_n = neg + (1 - neg(X)) P_n whose MMD to the positive part equals
  (1 - neg(X)) |P_n| exactly, yet which keeps no mass near that target.

* :func:`dirac_null_kernel` and friends build the kernels that admit such
  witnesses: conjugating a separating kernel by a field vanishing at xi
  kills the embedding of delta_xi while still separating mean-zero
  differences away from xi; shifting by 1 restores separation of all
  signed measures without changing the metric on probability measures;
  recentering at delta_xi gives the reverse counterexample.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .accumulate import weighted_gram_sum
from .embedding import mmd, norm
from .errors import (
    DimensionMismatchError,
    MeasureError,
    NotAWitnessError,
    ParameterError,
    SearchFailureError,
)
from .kernels import (
    C0_BUMP_SUP,
    Kernel,
    ScalarField,
    c0_bump_at,
    center_kernel,
    scale_kernel,
    shift_kernel,
)
from .measures import (
    MeasureSequence,
    SignedDiscreteMeasure,
    as_point,
    dirac,
    jordan_decompose,
    mixture,
    normalize_positive_part,
)

WITNESS_TOL = 1e-10


@dataclass(frozen=True)
class ExclusionRegion:
    """Closed ball the construction must keep all atoms strictly outside."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_point(self.center)
        if not math.isfinite(self.radius) or self.radius < 0:
            raise ParameterError("exclusion radius must be finite and nonnegative")
        object.__setattr__(self, "center", c)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        d = np.sqrt(((pts - self.center[None, :]) ** 2).sum(axis=1))
        return d <= self.radius


@dataclass(frozen=True)
class SearchDomain:
    """Candidate enumeration for the greedy point search.

    Strategies:
      ray    -- points at center + (R + m s) * direction, m = 1, 2, ...;
                s is derived analytically from the kernel when possible,
                else ``step``.
      grid   -- expanding integer shells scaled by ``step``.
      random -- seeded isotropic draws with linearly growing radius.

    All three enumerate an unbounded region, which the diffusing search
    needs; all three are deterministic given the seed.
    """

    dim: int
    strategy: str = "ray"
    direction: tuple[float, ...] | None = None
    step: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.strategy not in ("ray", "grid", "random"):
            raise ParameterError(f"unknown search strategy {self.strategy!r}")
        if self.step <= 0:
            raise ParameterError("search step must be positive")
        if self.dim < 1:
            raise ParameterError("search dimension must be at least 1")


def _unit_direction(dom: SearchDomain) -> np.ndarray:
    if dom.direction is None:
        e = np.zeros(dom.dim)
        e[0] = 1.0
        return e
    d = as_point(dom.direction, dom.dim)
    n = float(np.sqrt((d**2).sum()))
    if n == 0:
        raise ParameterError("search direction must be nonzero")
    return d / n


def _ray_candidates(dom: SearchDomain, excl: ExclusionRegion, spacing: float):
    u = _unit_direction(dom)
    for m in itertools.count(1):
        yield excl.center + (excl.radius + m * spacing) * u


def _grid_candidates(dom: SearchDomain, excl: ExclusionRegion):
    d = dom.dim
    for shell in itertools.count(1):
        rng = range(-shell, shell + 1)
        for z in itertools.product(rng, repeat=d):
            if max(abs(c) for c in z) != shell:
                continue
            yield excl.center + dom.step * np.asarray(z, dtype=np.float64)


def _random_candidates(dom: SearchDomain, excl: ExclusionRegion):
    rng = np.random.default_rng(dom.seed)
    for m in itertools.count():
        v = rng.standard_normal(dom.dim)
        n = float(np.sqrt((v**2).sum())) or 1.0
        radius = excl.radius + dom.step * (1.0 + 0.25 * m + rng.random())
        yield excl.center + (radius / n) * v


def _candidates(dom: SearchDomain, excl: ExclusionRegion, spacing: float):
    if dom.strategy == "ray":
        return _ray_candidates(dom, excl, spacing)
    if dom.strategy == "grid":
        return _grid_candidates(dom, excl)
    return _random_candidates(dom, excl)


# spacing is shaved slightly below the analytic solution of k(s) = eps so
# the greedy acceptance test is not decided by the last ulp
_SPACING_MARGIN = 1.0 - 1e-9


def suggested_spacing(k: Kernel, eps: float) -> float | None:
    """Analytic ray spacing so consecutive points have |k| <= eps.

    Works down the descriptor tree for translation-invariant bases wrapped
    in scalings with a declared sup; returns None when no analytic rule
    applies (the greedy verification still guards correctness).
    """
    if eps <= 0:
        raise ParameterError("eps must be positive")
    return _spacing_from_descriptor(k.descriptor, eps)


def _spacing_from_descriptor(desc: dict, eps: float) -> float | None:
    target = eps * _SPACING_MARGIN
    family = desc.get("family")
    if family == "gaussian":
        if target >= 1.0:
            return None
        return desc["sigma"] * math.sqrt(2.0 * math.log(1.0 / target))
    if family == "laplacian":
        if target >= 1.0:
            return None
        return math.log(1.0 / target) / desc["gamma"]
    if family == "inverse_multiquadric":
        if target >= 1.0:
            return None
        return desc["c"] * math.sqrt(target ** (-1.0 / desc["beta"]) - 1.0)
    op = desc.get("op")
    if op == "scale":
        sup = _field_sup(desc.get("field", {}))
        if sup is None:
            return None
        # |g(x) k g(y)| <= sup^2 |k|; a bound >= 1 means no constraint at all
        child_eps = eps / (sup * sup)
        if child_eps >= 1.0:
            return None
        return _spacing_from_descriptor(desc["child"], child_eps)
    return None


def _field_sup(field_desc: dict) -> float | None:
    name = field_desc.get("g")
    if name == "c0_bump_at":
        return C0_BUMP_SUP
    if name == "c0_null_at":
        return C0_BUMP_SUP ** max(1, len(field_desc.get("xis", [])))
    if name == "saturating_at":
        return 1.0
    sup = field_desc.get("sup")
    return float(sup) if sup is not None else None


def diffusing_sequence(
    k: Kernel,
    n: int,
    eps: float,
    excl: ExclusionRegion,
    dom: SearchDomain | None = None,
    max_candidates: int = 200_000,
) -> SignedDiscreteMeasure:
    """Uniform probability measure on n greedily chosen points.

    Every atom lies strictly outside ``excl`` and every off-diagonal kernel
    value satisfies |k(x_i, x_j)| <= eps.  The greedy loop accepts a
    candidate exactly when it clears the ball and the pairwise bound
    against all previously accepted points; enumeration order and budget
    come from ``dom``.

    Raises :class:`SearchFailureError` naming the first index that could
    not be filled within ``max_candidates`` candidates.
    """
    if n < 1:
        raise ParameterError("n must be at least 1")
    if eps <= 0:
        raise ParameterError("eps must be positive")
    if not k.claims_c0:
        raise ParameterError(
            "diffusing_sequence needs a kernel whose sections vanish at "
            "infinity; the greedy search cannot be expected to terminate "
            "otherwise"
        )
    dom = dom or SearchDomain(dim=k.dim)
    if dom.dim != k.dim:
        raise DimensionMismatchError(
            f"search dimension {dom.dim} != kernel dimension {k.dim}"
        )
    if excl.center.shape[0] != k.dim:
        raise DimensionMismatchError("exclusion center dimension mismatch")

    spacing = suggested_spacing(k, eps) or dom.step
    accepted: list[np.ndarray] = []
    for cand in itertools.islice(_candidates(dom, excl, spacing), max_candidates):
        if excl.contains(cand[None, :])[0]:
            continue
        if accepted:
            vals = k.block(cand[None, :], np.asarray(accepted))
            if float(np.max(np.abs(vals))) > eps:
                continue
        accepted.append(cand)
        if len(accepted) == n:
            break
    if len(accepted) < n:
        failed = len(accepted) + 1
        raise SearchFailureError(
            f"could not place point {failed} of {n} within {max_candidates} "
            f"candidates (eps={eps!r}, strategy={dom.strategy!r})",
            failed_index=failed,
        )
    atoms = np.asarray(accepted)
    return SignedDiscreteMeasure(atoms, np.full(n, 1.0 / n), k.dim)


@dataclass(frozen=True)
class DiffusionCertificate:
    """Exhaustively recomputed evidence for a diffusing measure.

    ``norm_bound`` is sup/n + (n-1) eps / n; ``ok`` requires the pairwise
    bound, the exclusion clearance, and norm_sq <= norm_bound, all checked
    from scratch rather than trusted from the search.
    """

    n: int
    eps: float
    max_offdiag: float
    min_exclusion_distance: float
    exclusion_radius: float
    norm_sq: float
    norm_bound: float
    ok: bool


def verify_diffusing(
    k: Kernel, p: SignedDiscreteMeasure, eps: float, excl: ExclusionRegion
) -> DiffusionCertificate:
    """O(n^2) recheck of the diffusing-sequence guarantees."""
    n = p.support_size
    G = k.block(p.atoms, p.atoms)
    off = np.abs(G - np.diag(np.diag(G)))
    max_off = float(off.max()) if n > 1 else 0.0
    dists = np.sqrt(((p.atoms - excl.center[None, :]) ** 2).sum(axis=1))
    min_dist = float(dists.min()) if n else math.inf
    norm_sq = weighted_gram_sum(p.weights, G, p.weights)
    bound = k.sup_bound / n + (n - 1) * eps / n
    ok = max_off <= eps and min_dist > excl.radius and norm_sq <= bound
    return DiffusionCertificate(
        n=n,
        eps=eps,
        max_offdiag=max_off,
        min_exclusion_distance=min_dist,
        exclusion_radius=excl.radius,
        norm_sq=norm_sq,
        norm_bound=bound,
        ok=ok,
    )


def diffusing_norm_bound(sup_bound: float, n: int, eps: float) -> float:
    """The displayed norm bound sup/n + (n-1) eps / n."""
    return sup_bound / n + (n - 1) * eps / n


# ---------------------------------------------------------------------------
# escape construction from an annihilated witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EscapeConstruction:
    """Output of :func:`escape_sequence`.

    ``sequence`` holds mu_n = residual + scale * P_n (probability measures);
    ``target`` is the positive part they approach in MMD; ``diffusing``
    keeps the raw P_n; ``probe_radius`` is an open-ball radius around
    ``center`` that contains the whole witness support but none of the
    diffusing atoms, so mass inside it stays at residual mass < 1 forever.
    """

    sequence: MeasureSequence
    target: SignedDiscreteMeasure
    residual: SignedDiscreteMeasure
    scale: float
    diffusing: tuple[SignedDiscreteMeasure, ...]
    exclusion: ExclusionRegion
    center: np.ndarray
    probe_radius: float


def default_indices(n_max: int) -> tuple[int, ...]:
    """Powers of two up to n_max (dyadic sizes keep 1/n and masses exact)."""
    if n_max < 2:
        raise ParameterError("n_max must be at least 2")
    out = []
    n = 2
    while n <= n_max:
        out.append(n)
        n *= 2
    return tuple(out)


def escape_sequence(
    k: Kernel,
    witness: SignedDiscreteMeasure,
    n_values=None,
    n_max: int = 64,
    dom: SearchDomain | None = None,
    excl: ExclusionRegion | None = None,
    margin: float = 1.0,
    witness_tol: float = WITNESS_TOL,
    max_candidates: int = 200_000,
) -> EscapeConstruction:
    """Build mu_n = neg + (1 - neg(X)) P_n from an annihilated witness.

    The witness is normalized so its positive part has mass 1 and must have
    embedding norm <= witness_tol (exact vanishing holds analytically for
    the null-kernel witnesses; the tolerance only absorbs float noise) and
    strictly smaller negative mass.  Witnesses with equal positive and
    negative mass are a separate, simpler refutation: see
    :func:`equal_mass_pair`.

    Because the negative part and the positive part share an embedding,
    mmd(mu_n, pos) = (1 - neg(X)) |P_n| holds exactly, while every mu_n
    puts mass neg(X) < 1 near the witness support.
    """
    mu = normalize_positive_part(witness)
    w_norm = norm(k, mu)
    if w_norm > witness_tol:
        raise NotAWitnessError(
            f"witness has embedding norm {w_norm!r} > {witness_tol!r}; "
            "it is not annihilated by this kernel"
        )
    pos, neg = jordan_decompose(mu)
    neg_mass = neg.total_mass
    if neg_mass >= 1.0 - 1e-12:
        raise MeasureError(
            "witness has equal positive and negative mass; the construction "
            "degenerates to two probability measures at distance zero "
            "(use equal_mass_pair)"
        )

    center = mu.atoms.mean(axis=0)
    support_radius = float(
        np.sqrt(((mu.atoms - center[None, :]) ** 2).sum(axis=1)).max()
    )
    if excl is None:
        if margin <= 0:
            raise ParameterError("margin must be positive")
        excl = ExclusionRegion(center=center, radius=support_radius + margin)
    elif np.any(~excl.contains(mu.atoms)):
        raise ParameterError("exclusion ball must contain the witness support")
    # the probe ball sits around the witness centroid; it must hold the whole
    # support yet stay inside the exclusion ball so no diffusing atom enters
    offset = float(np.sqrt(((center - excl.center) ** 2).sum()))
    max_safe = excl.radius - offset
    if max_safe <= support_radius:
        raise ParameterError(
            "exclusion ball leaves no room for a probe ball around the "
            "witness support"
        )
    probe_radius = (support_radius + max_safe) / 2.0
    dom = dom or SearchDomain(dim=k.dim)

    indices = tuple(int(n) for n in (n_values or default_indices(n_max)))
    if any(n < 1 for n in indices):
        raise ParameterError("sequence sizes must be positive")
    scale = 1.0 - neg_mass
    parts = []
    items = []
    for n in indices:
        p_n = diffusing_sequence(k, n, 1.0 / n, excl, dom, max_candidates)
        parts.append(p_n)
        items.append(mixture([1.0, scale], [neg, p_n]))
    return EscapeConstruction(
        sequence=MeasureSequence(tuple(items), label="escape", indices=indices),
        target=pos,
        residual=neg,
        scale=scale,
        diffusing=tuple(parts),
        exclusion=excl,
        center=center,
        probe_radius=probe_radius,
    )


def identity_residuals(k: Kernel, cons: EscapeConstruction) -> np.ndarray:
    """Per-index |mmd(mu_n, target) - scale * |P_n||, both sides recomputed."""
    out = np.empty(len(cons.sequence))
    for i, (mu_n, p_n) in enumerate(zip(cons.sequence, cons.diffusing)):
        out[i] = abs(mmd(k, mu_n, cons.target) - cons.scale * norm(k, p_n))
    return out


def equal_mass_pair(
    k: Kernel,
    witness: SignedDiscreteMeasure,
    witness_tol: float = WITNESS_TOL,
) -> tuple[SignedDiscreteMeasure, SignedDiscreteMeasure]:
    """The equal-mass branch: two probability measures at MMD ~ 0.

    When the witness has equal positive and negative mass, its two halves
    are already distinct probability measures with the same embedding; no
    sequence is needed to refute separation.
    """
    mu = normalize_positive_part(witness)
    w_norm = norm(k, mu)
    if w_norm > witness_tol:
        raise NotAWitnessError(
            f"witness has embedding norm {w_norm!r} > {witness_tol!r}"
        )
    pos, neg = jordan_decompose(mu)
    if abs(neg.total_mass - pos.total_mass) > 1e-12:
        raise MeasureError(
            "equal_mass_pair needs a witness with equal positive and "
            "negative mass; use escape_sequence otherwise"
        )
    return pos, neg


# ---------------------------------------------------------------------------
# counterexample kernels
# ---------------------------------------------------------------------------


def dirac_null_kernel(
    base: Kernel, xi, g: ScalarField | None = None
) -> Kernel:
    """Conjugate ``base`` by a field vanishing only at xi.

    The result annihilates delta_xi (its embedding is the zero function)
    while, for a separating base, still separating all mean-zero signed
    measures supported away from xi.  The field must vanish at infinity;
    a merely bounded field (e.g. :func:`saturating_at`) is rejected because
    it cannot guarantee decaying sections over an arbitrary bounded base.
    """
    p = as_point(xi, base.dim)
    if g is None:
        g = c0_bump_at(p)
    if not g.is_c0:
        raise ParameterError(
            "scaling field must vanish at infinity (is_c0=True); "
            f"got field {g.descriptor or '<custom>'}"
        )
    if g.dim != base.dim:
        raise DimensionMismatchError("field dimension does not match the kernel")
    if g(p) != 0.0:
        raise ParameterError("scaling field must be exactly zero at xi")
    return scale_kernel(base, g)


def shifted_dirac_null_kernel(base: Kernel, xi, g: ScalarField | None = None) -> Kernel:
    """dirac_null_kernel + 1: separates all signed measures again, but keeps
    the null kernel's metric on probability measures, so MMD convergence to
    delta_xi no longer implies any mass ever reaches xi."""
    return shift_kernel(dirac_null_kernel(base, xi, g), 1.0)


def dirac_centered_kernel(base: Kernel, xi) -> Kernel:
    """Recenter ``base`` at delta_xi (offset 0).

    Annihilates delta_xi, so it no longer separates all signed measures,
    yet induces exactly the base kernel's metric on probability measures.
    """
    return center_kernel(base, dirac(xi, base.dim), 0.0)
