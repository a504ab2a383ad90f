"""Kernel mean embeddings and the maximum mean discrepancy for discrete measures.

For a finitely supported signed measure the embedding is a finite sum, the
inner product of two embeddings is a double sum over atom pairs, and the MMD
is the norm of a difference of embeddings.  Two independent routes compute
the same distance:

* :func:`mmd` expands |mu - nu|^2 into three inner products over the
  original supports;
* :func:`mmd_oracle` first forms mu - nu explicitly (merging atoms) and
  evaluates one double sum.

They share no intermediate results, which is the point: agreement between
them is a meaningful check.  All double sums are exactly rounded (see
:mod:`mmdlab.accumulate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .accumulate import exact_sum, weighted_gram_sum
from .errors import DimensionMismatchError, SupportSizeError
from .kernels import Kernel
from .measures import SignedDiscreteMeasure, as_point

ORACLE_SUPPORT_LIMIT = 2000


def _check_dims(k: Kernel, *measures: SignedDiscreteMeasure) -> None:
    for m in measures:
        if m.dim != k.dim:
            raise DimensionMismatchError(
                f"measure dimension {m.dim} != kernel dimension {k.dim}"
            )


def kme_eval(k: Kernel, mu: SignedDiscreteMeasure, x) -> float:
    """Value of mu's mean embedding at the point x: sum_i w_i k(a_i, x)."""
    _check_dims(k, mu)
    if mu.support_size == 0:
        return 0.0
    xa = as_point(x, k.dim)
    column = k.block(mu.atoms, xa[None, :])[:, 0]
    return exact_sum(mu.weights * column)


def inner(k: Kernel, mu: SignedDiscreteMeasure, nu: SignedDiscreteMeasure) -> float:
    """Embedding inner product: the double sum of w_i v_j k(a_i, b_j)."""
    _check_dims(k, mu, nu)
    if mu.support_size == 0 or nu.support_size == 0:
        return 0.0
    return weighted_gram_sum(mu.weights, k.block(mu.atoms, nu.atoms), nu.weights)


def norm(k: Kernel, mu: SignedDiscreteMeasure) -> float:
    """Embedding norm |mu| (self inner product, clamped at zero)."""
    return math.sqrt(max(0.0, inner(k, mu, mu)))


@dataclass(frozen=True)
class MMDResult:
    """MMD value plus the metadata needed to audit it.

    ``squared_raw`` is the pre-clamp value of |mu - nu|^2; ``clamped`` is
    True when cancellation drove it (slightly) negative and the reported
    value was clamped to 0.  A large negative ``squared_raw`` would point at
    a kernel that is not positive definite, which silent clamping would
    hide.
    """

    value: float
    squared_raw: float
    clamped: bool
    kernel_descriptor: dict


def mmd_detail(
    k: Kernel, mu: SignedDiscreteMeasure, nu: SignedDiscreteMeasure
) -> MMDResult:
    """MMD with clamp metadata; see :func:`mmd` for the plain value."""
    ii = inner(k, mu, mu)
    jj = inner(k, nu, nu)
    ij = inner(k, mu, nu)
    squared = math.fsum([ii, jj, -ij, -ij])
    clamped = squared < 0.0
    return MMDResult(
        value=math.sqrt(max(0.0, squared)),
        squared_raw=squared,
        clamped=clamped,
        kernel_descriptor=k.descriptor,
    )


def mmd(k: Kernel, mu: SignedDiscreteMeasure, nu: SignedDiscreteMeasure) -> float:
    """Distance between the embeddings of mu and nu under k."""
    return mmd_detail(k, mu, nu).value


def mmd_oracle(k: Kernel, mu: SignedDiscreteMeasure, nu: SignedDiscreteMeasure) -> float:
    """Brute-force MMD: merge mu - nu, then one double sum over its support.

    Kept deliberately independent of :func:`mmd`; limited to combined
    supports of 2000 atoms.
    """
    _check_dims(k, mu, nu)
    if mu.support_size + nu.support_size > ORACLE_SUPPORT_LIMIT:
        raise SupportSizeError(
            f"combined support {mu.support_size + nu.support_size} exceeds "
            f"oracle limit {ORACLE_SUPPORT_LIMIT}"
        )
    diff = mu - nu
    if diff.support_size == 0:
        return 0.0
    G = k.block(diff.atoms, diff.atoms)
    sq = weighted_gram_sum(diff.weights, G, diff.weights)
    return math.sqrt(max(0.0, sq))


def self_inner_tolerance(mu: SignedDiscreteMeasure, sup_bound: float) -> float:
    """Worst-case cancellation allowance for inner(mu, mu) >= -tol."""
    tv = mu.total_variation
    return 1e-8 * tv * tv * sup_bound
