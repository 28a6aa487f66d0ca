"""Shared builders for the test suite."""

from fractions import Fraction

from quiver_dt.quiver import (Edge, SelfDualQuiver, kronecker_variant,
                              make_calibration, point_quiver)
from quiver_dt.ratfunc import RatFunc
from quiver_dt.torus import TorusElem, TorusModElem

# resolved by the oracle; kept literal here so the algebra tests do not
# depend on the resolution code they help validate
KNOWN_SIGNS = (-1, 1)


def calibrated(q: SelfDualQuiver) -> SelfDualQuiver:
    q.set_calibration(make_calibration(q, *KNOWN_SIGNS))
    return q


def calibrated_kron(esigns=(1, 1), vsign=1) -> SelfDualQuiver:
    return calibrated(kronecker_variant(esigns, vsign))


def calibrated_point(vsign=1) -> SelfDualQuiver:
    return calibrated(point_quiver(vsign))


def mixed_quiver() -> SelfDualQuiver:
    """Three vertices with a swapped pair and a symplectic fixed vertex,
    a swapped edge pair and a fixed edge."""
    edges = [Edge("a", "i", "j"), Edge("b", "j", "k"), Edge("c", "i", "k")]
    return SelfDualQuiver(
        ["i", "j", "k"], edges,
        {"i": "k", "k": "i"}, {"a": "b", "b": "a"},
        {"j": -1}, {"b": -1},
    )


def calibrated_mixed() -> SelfDualQuiver:
    return calibrated(mixed_quiver())


def rand_vec(rng, n, hi=2, allow_zero=False):
    while True:
        v = tuple(rng.randint(0, hi) for _ in range(n))
        if allow_zero or sum(v) > 0:
            return v


def rand_coeff(rng) -> RatFunc:
    num = rng.randint(-4, 4) or 1
    c = RatFunc(Fraction(num, rng.randint(1, 3)))
    return c * RatFunc.q_power(rng.randint(-2, 2))


def rand_elem(q, rng, terms=2, hi=2, bound=None) -> TorusElem:
    coeffs = {}
    for _ in range(terms):
        coeffs[rand_vec(rng, len(q.vertices), hi)] = rand_coeff(rng)
    return TorusElem(q, coeffs, bound)


def rand_sd_class(q, rng, hi=1):
    a = rand_vec(rng, len(q.vertices), hi, allow_zero=True)
    return tuple(x + y for x, y in zip(a, q.dual_vector(a)))


def rand_mod_elem(q, rng, terms=2, hi=1, bound=None) -> TorusModElem:
    coeffs = {}
    for _ in range(terms):
        coeffs[rand_sd_class(q, rng, hi)] = rand_coeff(rng)
    return TorusModElem(q, coeffs, bound)
