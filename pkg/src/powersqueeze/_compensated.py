"""Error-free transformations for compensated dot products.

two_sum / two_prod return the rounded result together with its exact
floating-point error term (Knuth's algorithm and Dekker's split; no FMA
required). comp_dot evaluates a short real dot product with the products
and partial sums carried exactly, so cancellation between the terms does
not amplify roundoff.
"""

from __future__ import annotations


_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def comp_dot(pairs) -> float:
    """Compensated sum of a_i * b_i over (a_i, b_i) pairs."""
    s = 0.0
    comp = 0.0
    for a, b in pairs:
        p, ep = two_prod(a, b)
        s, es = two_sum(s, p)
        comp += ep + es
    return s + comp
