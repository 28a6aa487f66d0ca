"""Motivic classes of representation stacks.

All values live in Q(q) with L = q^2 the Lefschetz class.  The group motives
are the reciprocals of the counting polynomials of the classical groups in
the normalization that makes stack classes come out as q-power prefactors
times products of group motives:

  motive_gl(n)   = prod_{i<n} 1/(L^n - L^i)
  motive_o(2n)   = L^n    * prod_{i<n} 1/(L^{2n} - L^{2i})
  motive_o(2n+1) = L^{-n} * prod_{i<n} 1/(L^{2n} - L^{2i})
  motive_sp(2n)  = L^{-n} * prod_{i<n} 1/(L^{2n} - L^{2i})

The stack of all representations of a class alpha contributes
q^(dim R + dim G) times the motive of its automorphism group, and likewise
on the self-dual side with orthogonal and symplectic factors at fixed
vertices.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .quiver import DimVector, SelfDualQuiver
from .ratfunc import RatFunc

_gl_cache: Dict[int, RatFunc] = {}
_o_cache: Dict[int, RatFunc] = {}
_sp_cache: Dict[int, RatFunc] = {}


def _inv_l_product(n: int, step: int) -> RatFunc:
    # prod_{i<n} 1/(L^{step*n} - L^{step*i}) with L = q^2
    out = RatFunc(1)
    for i in range(n):
        out = out / (RatFunc.q_power(2 * step * n)
                     - RatFunc.q_power(2 * step * i))
    return out


def motive_gl(n: int) -> RatFunc:
    if n < 0:
        raise ValueError("negative rank")
    if n not in _gl_cache:
        _gl_cache[n] = _inv_l_product(n, 1)
    return _gl_cache[n]


def motive_o(m: int) -> RatFunc:
    if m < 0:
        raise ValueError("negative rank")
    if m not in _o_cache:
        n, odd = divmod(m, 2)
        base = _inv_l_product(n, 2)
        power = -2 * n if odd else 2 * n
        _o_cache[m] = RatFunc.q_power(power) * base
    return _o_cache[m]


def motive_sp(m: int) -> RatFunc:
    if m < 0 or m % 2:
        raise ValueError("symplectic rank must be even and nonnegative")
    if m not in _sp_cache:
        n = m // 2
        _sp_cache[m] = RatFunc.q_power(-2 * n) * _inv_l_product(n, 2)
    return _sp_cache[m]


def stack_class(quiver: SelfDualQuiver, alpha: DimVector) -> RatFunc:
    """Motivic class of the stack of all representations of class alpha."""
    out = RatFunc.q_power(quiver.dim_rep(alpha) + quiver.dim_aut(alpha))
    for x in alpha:
        out = out * motive_gl(x)
    return out


def sd_stack_class(quiver: SelfDualQuiver, theta: DimVector) -> RatFunc:
    """Motivic class of the stack of all self-dual representations."""
    if not quiver.is_sd_class(theta):
        raise ValueError(f"{theta} is not a self-dual class")
    out = RatFunc.q_power(quiver.sd_dim_rep(theta) + quiver.sd_dim_aut(theta))
    for i, _ in quiver.vertex_pairs:
        out = out * motive_gl(theta[i])
    for i in quiver.fixed_vertices:
        if quiver.vertex_sign[i] > 0:
            out = out * motive_o(theta[i])
        else:
            out = out * motive_sp(theta[i])
    return out
