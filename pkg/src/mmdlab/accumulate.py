"""Exactly-rounded accumulation for the double sums behind every embedding.

The counterexample experiments drive squared norms toward zero, where the
relative error of a naive running sum would dominate the quantity being
measured.  All inner products therefore funnel through :func:`exact_sum`,
which is Shewchuk summation (``math.fsum``): the result is the correctly
rounded value of the exact real sum, independent of term order.
"""

from __future__ import annotations

import math

import numpy as np


def exact_sum(values) -> float:
    """Correctly rounded sum of an array of floats (any shape)."""
    arr = np.asarray(values, dtype=np.float64)
    return math.fsum(arr.ravel().tolist())


def weighted_gram_sum(w: np.ndarray, gram: np.ndarray, v: np.ndarray) -> float:
    """Exactly-rounded ``sum_ij w_i * gram_ij * v_j``."""
    terms = np.multiply.outer(np.asarray(w, float), np.asarray(v, float)) * gram
    return exact_sum(terms)
