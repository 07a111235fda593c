"""Dimension bookkeeping for the product setting.

A peak profile living on an n-dimensional factor of an N = n + m
dimensional product carries the critical exponent of the *total*
dimension, p = 2N/(N-2), while the radial variable is n-dimensional.
Keeping (n, m) together avoids a whole class of off-by-one errors in
the exponents, so everything downstream takes a :class:`Dimensions`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class Dimensions:
    """Factor dimension ``n`` and complement dimension ``m``.

    Parameters
    ----------
    n : int
        Dimension of the factor the profile is radial in. ``n >= 2``
        for production use; ``n = 1`` is admitted as a degenerate
        test-only case where the profile has a closed sech form.
    m : int
        Dimension of the complementary factor, ``m >= 1``.

    Notes
    -----
    The exponent is always subcritical for the factor: p < 2n/(n-2)
    is equivalent to N > n, which holds whenever m >= 1.
    """

    n: int
    m: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise ValueError("n and m must be integers")
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.n + self.m < 3:
            raise ValueError(
                f"total dimension N = n + m = {self.n + self.m} < 3: "
                "the exponent 2N/(N-2) is undefined or negative"
            )

    @cached_property
    def N(self) -> int:
        """Total dimension of the product."""
        return self.n + self.m

    @cached_property
    def p(self) -> float:
        """Critical exponent of the total dimension, 2N/(N-2)."""
        return 2.0 * self.N / (self.N - 2.0)

    @cached_property
    def c_N(self) -> float:
        """Conformal constant (N-2)/(4(N-1)) multiplying scalar curvature."""
        return (self.N - 2.0) / (4.0 * (self.N - 1.0))

    def __str__(self):
        return f"(n={self.n}, m={self.m}, N={self.N}, p={self.p:.6g})"
