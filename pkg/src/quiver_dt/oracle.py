"""Sign calibration and independent cross-check machinery.

The twisted products leave two global signs undetermined: the orientation of
the antisymmetrized Euler pairing and the placement sign of the fixed-edge
linear term.  This module pins both against a table of reference quivers
whose invariants are known in closed form, verifies the resolved calibration
on every quiver it is asked to calibrate, and provides deliberately naive
enumerators that recompute the semistable and epsilon integrals without any
of the shared recursion code, for use as oracles in tests.

The exponent forms are recomputed here from scratch by counting graded
blocks of the deformation complex at a graded point, so that agreement with
the Euler-form expressions in the quiver module is a genuine cross-check and
not a tautology.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .motives import sd_stack_class, stack_class
from .quiver import (Calibration, DimVector, SelfDualQuiver, Slope,
                     boxed_vectors, kronecker_variant, make_calibration,
                     vadd, vleq, vsub, vtotal)
from .ratfunc import RatFunc, binom_fraction


class CalibrationError(RuntimeError):
    """Sign resolution failed or a calibrated identity broke."""


# Twist exponents B(e_i, 0) on the six double-arrow reference variants,
# keyed by (edge signs, vertex sign).  These values are forced by the known
# closed-form generating series of those quivers, which the acceptance suite
# reproduces end to end.
REFERENCE_TWISTS: Dict[Tuple[Tuple[int, int], int], int] = {
    ((1, 1), 1): -2,
    ((1, -1), 1): -1,
    ((-1, -1), 1): 0,
    ((1, 1), -1): 0,
    ((1, -1), -1): -1,
    ((-1, -1), -1): -2,
}

# Commutation exponent A((1,0),(0,1)) on the same quivers: forced by the
# projective-line motive showing up as the first nontrivial integral.
REFERENCE_COMMUTATION = -2

_UNIT = (1, 0)
_COUNIT = (0, 1)
_ZERO2 = (0, 0)


# -- first-principles exponent counts -----------------------------------------

def brute_force_commutation(quiver: SelfDualQuiver, alpha: DimVector,
                            beta: DimVector, orientation: int) -> int:
    """Euler count of the positive-weight deformation blocks at a graded
    point with one factor in weight one and the other in weight zero."""
    x, y = (alpha, beta) if orientation == -1 else (beta, alpha)
    nv = range(len(quiver.vertices))
    hom_g = sum(y[i] * x[i] for i in nv)
    hom_v = sum(y[s] * x[t] for s, t in quiver.edge_endpoints)
    hom_vd = sum(x[s] * y[t] for s, t in quiver.edge_endpoints)
    hom_gd = sum(x[i] * y[i] for i in nv)
    # degrees -1, 0, 1, 2
    return -hom_g + hom_v - hom_vd + hom_gd


def brute_force_sd_twist(quiver: SelfDualQuiver, alpha: DimVector,
                         theta: DimVector, orientation: int,
                         placement: int) -> Fraction:
    """Euler count of the positive-weight part of the involution-fixed
    deformation complex at a graded point with blocks of weight 1, 0, -1
    and dimensions alpha, theta, dual(alpha).

    Fixed dimensions are (dim + trace)/2 per block; the involution only has
    nonzero trace on the weight-two blocks of fixed edges, where it acts by
    a signed transpose.  placement is the undetermined global sign of that
    transpose; orientation picks which of alpha, dual(alpha) sits in weight
    one.
    """
    up = alpha if orientation == -1 else quiver.dual_vector(alpha)
    dn = quiver.dual_vector(up)
    md = theta
    nv = range(len(quiver.vertices))

    dim_g = sum(md[i] * up[i] + dn[i] * md[i] + dn[i] * up[i] for i in nv)
    dim_gd = sum(up[i] * md[i] + md[i] * dn[i] + up[i] * dn[i] for i in nv)
    dim_v = 0
    dim_vd = 0
    for s, t in quiver.edge_endpoints:
        dim_v += md[s] * up[t] + dn[s] * md[t] + dn[s] * up[t]
        dim_vd += up[s] * md[t] + md[s] * dn[t] + up[s] * dn[t]
    chi_dim = -dim_g + dim_v - dim_vd + dim_gd

    trace = 0
    for a in quiver.fixed_edges:
        s, t = quiver.edge_endpoints[a]
        trace += quiver.fixed_edge_sign(a) * (up[t] - up[s])
    return Fraction(chi_dim + placement * trace, 2)


# -- global sign resolution ----------------------------------------------------

_RESOLVED: Optional[Tuple[int, int]] = None
_RESOLVED_BRUTE: Optional[Tuple[int, int]] = None


def _reference_quivers():
    for (esigns, vsign) in REFERENCE_TWISTS:
        yield (esigns, vsign), kronecker_variant(esigns, vsign)


def resolve_global_signs() -> Tuple[int, int]:
    """Pin (orientation, placement) for the Euler-form expressions against
    the reference twist table.  Exactly one candidate must survive."""
    global _RESOLVED
    if _RESOLVED is not None:
        return _RESOLVED
    survivors = []
    for orientation in (1, -1):
        for placement in (1, -1):
            ok = True
            for key, ref in _reference_quivers():
                ref.set_calibration(make_calibration(ref, orientation, placement))
                if ref.sd_twist_exponent(_UNIT, _ZERO2) != REFERENCE_TWISTS[key]:
                    ok = False
                    break
                if ref.commutation_exponent(_UNIT, _COUNIT) != REFERENCE_COMMUTATION:
                    ok = False
                    break
            if ok:
                survivors.append((orientation, placement))
    if len(survivors) != 1:
        raise CalibrationError(
            f"sign resolution must leave exactly one candidate, got {survivors}")
    _RESOLVED = survivors[0]
    return _RESOLVED


def resolve_brute_force_signs() -> Tuple[int, int]:
    """Same resolution for the block-count expressions.  Kept separate so the
    two code paths are pinned independently before being compared."""
    global _RESOLVED_BRUTE
    if _RESOLVED_BRUTE is not None:
        return _RESOLVED_BRUTE
    survivors = []
    for orientation in (1, -1):
        for placement in (1, -1):
            ok = True
            for key, ref in _reference_quivers():
                want = Fraction(REFERENCE_TWISTS[key])
                if brute_force_sd_twist(ref, _UNIT, _ZERO2, orientation,
                                        placement) != want:
                    ok = False
                    break
                if brute_force_commutation(ref, _UNIT, _COUNIT,
                                           orientation) != REFERENCE_COMMUTATION:
                    ok = False
                    break
            if ok:
                survivors.append((orientation, placement))
    if len(survivors) != 1:
        raise CalibrationError(
            f"block-count sign resolution left {survivors}")
    _RESOLVED_BRUTE = survivors[0]
    return _RESOLVED_BRUTE


# -- per-quiver calibration -----------------------------------------------------

def calibrate_signs(quiver: SelfDualQuiver, check_bound: int = 2) -> Calibration:
    """Attach the resolved calibration to the quiver after verifying the
    exponent identities on all classes up to check_bound."""
    orientation, placement = resolve_global_signs()
    cal = make_calibration(quiver, orientation, placement)
    quiver.set_calibration(cal)
    verify_calibration(quiver, check_bound)
    return cal


def ensure_calibrated(quiver: SelfDualQuiver, check_bound: int = 2) -> None:
    if quiver.calibration is None:
        calibrate_signs(quiver, check_bound)


def verify_calibration(quiver: SelfDualQuiver, bound: int = 2) -> Dict[str, int]:
    """Check the calibrated exponent forms against the block counts and the
    structural identities they must satisfy.  Returns check counters; raises
    CalibrationError on the first failure."""
    if quiver.calibration is None:
        raise CalibrationError("quiver has no calibration attached")
    b_orient, b_place = resolve_brute_force_signs()
    zero = tuple(0 for _ in quiver.vertices)
    alphas = [zero] + quiver.dim_vectors_up_to(bound)
    thetas = quiver.sd_classes_up_to(bound)
    counts = {"commutation": 0, "twist": 0, "duality": 0, "additivity": 0,
              "associativity": 0}

    def fail(msg: str):
        raise CalibrationError(msg)

    for a in alphas:
        for b in alphas:
            got = quiver.commutation_exponent(a, b)
            if got != brute_force_commutation(quiver, a, b, b_orient):
                fail(f"commutation exponent mismatch at {a}, {b}")
            if got != -quiver.commutation_exponent(b, a):
                fail(f"commutation exponent not antisymmetric at {a}, {b}")
            da, db = quiver.dual_vector(a), quiver.dual_vector(b)
            if quiver.commutation_exponent(db, da) != got:
                fail(f"commutation exponent breaks duality at {a}, {b}")
            counts["commutation"] += 1

    for a in alphas:
        for th in thetas:
            got = quiver.sd_twist_exponent(a, th)
            if got != brute_force_sd_twist(quiver, a, th, b_orient, b_place):
                fail(f"twist exponent mismatch at {a}, {th}")
            if got.denominator != 1:
                fail(f"twist exponent not integral at {a}, {th}")
            if quiver.sd_twist_exponent(quiver.dual_vector(a), th) != -got:
                fail(f"twist exponent breaks duality at {a}, {th}")
            counts["twist"] += 1

    small = [zero] + quiver.dim_vectors_up_to(max(1, bound - 1))
    for a in small:
        for b in small:
            for c in small:
                lhs = quiver.commutation_exponent(a, vadd(b, c))
                rhs = (quiver.commutation_exponent(a, b)
                       + quiver.commutation_exponent(a, c))
                if lhs != rhs:
                    fail(f"commutation exponent not bilinear at {a}, {b}, {c}")
                counts["additivity"] += 1
            for th in thetas:
                lhs = (Fraction(quiver.commutation_exponent(a, b))
                       + quiver.sd_twist_exponent(vadd(a, b), th))
                rhs = (quiver.sd_twist_exponent(a, quiver.sd_completion(b, th))
                       + quiver.sd_twist_exponent(b, th))
                if lhs != rhs:
                    fail(f"twist exponents break associativity at {a}, {b}, {th}")
                counts["associativity"] += 1

    counts["duality"] = counts["commutation"] + counts["twist"]
    return counts


# -- naive decomposition enumerators (test oracles) -----------------------------

def _nonzero_boxed(limit: DimVector) -> List[DimVector]:
    return [v for v in boxed_vectors(limit) if vtotal(v) > 0]


def direct_semistable_integral(quiver: SelfDualQuiver, slope: Slope,
                               alpha: DimVector) -> RatFunc:
    """Semistable integral by explicit enumeration of ordered decompositions
    whose proper prefixes sit strictly above the total slope.  Exponential;
    for cross-checks on small classes only."""
    if vtotal(alpha) == 0:
        return RatFunc(1)
    target = slope.value(alpha)
    out = RatFunc(0)

    def finalize(parts: List[DimVector]) -> None:
        nonlocal out
        n = len(parts)
        expo = 0
        for i in range(n):
            for j in range(i + 1, n):
                expo += quiver.commutation_exponent(parts[i], parts[j])
        term = RatFunc.q_power(expo)
        for p in parts:
            term = term * stack_class(quiver, p)
        if n % 2 == 0:
            term = -term
        out = out + term

    def rec(prefix: DimVector, parts: List[DimVector]) -> None:
        rem = vsub(alpha, prefix)
        if vtotal(rem) == 0:
            finalize(parts)
            return
        for part in _nonzero_boxed(rem):
            nxt = vadd(prefix, part)
            if nxt != alpha and slope.value(nxt) <= target:
                continue
            rec(nxt, parts + [part])

    rec(tuple(0 for _ in alpha), [])
    return out


def direct_sd_semistable_integral(quiver: SelfDualQuiver, slope: Slope,
                                  theta: DimVector) -> RatFunc:
    """Self-dual semistable integral by explicit enumeration of pairs of an
    ordered linear decomposition with all prefix slopes strictly positive and
    a self-dual remainder class."""
    if not quiver.is_sd_class(theta):
        raise ValueError(f"{theta} is not a self-dual class")
    slope.validate_self_dual(quiver)
    out = RatFunc(0)
    zero = tuple(0 for _ in theta)

    def finalize(parts: List[DimVector], rho: DimVector) -> None:
        nonlocal out
        expo = Fraction(0)
        suffix = rho
        for part in reversed(parts):
            expo += quiver.sd_twist_exponent(part, suffix)
            suffix = vadd(suffix, vadd(part, quiver.dual_vector(part)))
        if expo.denominator != 1:
            raise CalibrationError(
                f"non-integral twist exponent in decomposition {parts}, {rho}")
        term = RatFunc.q_power(int(expo))
        for p in parts:
            term = term * stack_class(quiver, p)
        term = term * sd_stack_class(quiver, rho)
        if len(parts) % 2:
            term = -term
        out = out + term

    def rec(prefix: DimVector, parts: List[DimVector]) -> None:
        used = vadd(prefix, quiver.dual_vector(prefix))
        rem = vsub(theta, used)
        if min(rem) >= 0 and quiver.is_sd_class(rem):
            finalize(parts, rem)
        if vtotal(rem) <= 0:
            return
        for part in _nonzero_boxed(rem):
            if not vleq(vadd(part, quiver.dual_vector(part)), rem):
                continue
            nxt = vadd(prefix, part)
            if slope.value(nxt) <= 0:
                continue
            rec(nxt, parts + [part])

    rec(zero, [])
    return out


def direct_epsilon_integral(quiver: SelfDualQuiver, slope: Slope,
                            alpha: DimVector) -> RatFunc:
    """Epsilon integral by explicit enumeration of ordered decompositions
    into parts of equal slope, on top of the naive semistable integrals."""
    if vtotal(alpha) == 0:
        return RatFunc(0)
    target = slope.value(alpha)
    out = RatFunc(0)

    def finalize(parts: List[DimVector]) -> None:
        nonlocal out
        n = len(parts)
        expo = 0
        for i in range(n):
            for j in range(i + 1, n):
                expo += quiver.commutation_exponent(parts[i], parts[j])
        term = RatFunc.q_power(expo)
        for p in parts:
            term = term * direct_semistable_integral(quiver, slope, p)
        coeff = Fraction(1, n) if n % 2 else Fraction(-1, n)
        out = out + term * RatFunc(coeff)

    def rec(prefix: DimVector, parts: List[DimVector]) -> None:
        rem = vsub(alpha, prefix)
        if vtotal(rem) == 0:
            finalize(parts)
            return
        for part in _nonzero_boxed(rem):
            if slope.value(part) != target:
                continue
            rec(vadd(prefix, part), parts + [part])

    rec(tuple(0 for _ in alpha), [])
    return out


def direct_sd_epsilon_integral(quiver: SelfDualQuiver, slope: Slope,
                               theta: DimVector) -> RatFunc:
    """Self-dual epsilon integral by explicit enumeration: ordered slope-zero
    linear parts with square-root binomial weights times a self-dual rest."""
    if not quiver.is_sd_class(theta):
        raise ValueError(f"{theta} is not a self-dual class")
    slope.validate_self_dual(quiver)
    out = RatFunc(0)
    zero = tuple(0 for _ in theta)

    def finalize(parts: List[DimVector], rho: DimVector) -> None:
        nonlocal out
        expo = Fraction(0)
        suffix = rho
        for part in reversed(parts):
            expo += quiver.sd_twist_exponent(part, suffix)
            suffix = vadd(suffix, vadd(part, quiver.dual_vector(part)))
        assert expo.denominator == 1
        term = RatFunc.q_power(int(expo))
        for p in parts:
            term = term * direct_semistable_integral(quiver, slope, p)
        term = term * direct_sd_semistable_integral(quiver, slope, rho)
        out = out + term * RatFunc(binom_fraction(Fraction(-1, 2), len(parts)))

    def rec(prefix: DimVector, parts: List[DimVector]) -> None:
        used = vadd(prefix, quiver.dual_vector(prefix))
        rem = vsub(theta, used)
        if min(rem) >= 0 and quiver.is_sd_class(rem):
            finalize(parts, rem)
        if vtotal(rem) <= 0:
            return
        for part in _nonzero_boxed(rem):
            if not vleq(vadd(part, quiver.dual_vector(part)), rem):
                continue
            if slope.value(part) != 0:
                continue
            rec(vadd(prefix, part), parts + [part])

    rec(zero, [])
    return out


# -- calibration report ----------------------------------------------------------

def verify_reference_values() -> List[Tuple[str, bool, str]]:
    """Recompute a few closed-form invariants of the reference quivers through
    the full pipeline.  Returns (label, passed, detail) rows."""
    from . import invariants
    from .quiver import point_quiver

    rows: List[Tuple[str, bool, str]] = []

    for vsign, want in ((1, Fraction(-1, 4)), (-1, Fraction(1, 4))):
        q = point_quiver(vsign)
        ensure_calibrated(q)
        got = invariants.sd_epsilon_integral(q, Slope.trivial(q), (2,)).eval_at(-1)
        label = f"point({vsign:+d}) epsilon at class (2)"
        rows.append((label, got == want, f"got {got}, want {want}"))

    kron = kronecker_variant((1, 1), 1)
    ensure_calibrated(kron)
    slope = Slope.from_dict(kron, {"i": 1, "j": -1})
    got = invariants.dt_mot(kron, slope, (1, 1))
    want_rf = RatFunc.q_power(1) + RatFunc.q_power(-1)
    rows.append(("double-arrow motivic invariant at (1,1)", got == want_rf,
                 f"got {got}, want {want_rf}"))
    return rows


def explain_calibration(quiver: SelfDualQuiver, bound: int = 2) -> Tuple[str, bool]:
    """Human-readable calibration report for a quiver; returns (text, ok)."""
    lines: List[str] = []
    ok = True
    try:
        orientation, placement = resolve_global_signs()
        b_or, b_pl = resolve_brute_force_signs()
        lines.append("global sign resolution")
        lines.append(f"  euler-form family:  orientation={orientation:+d} "
                     f"placement={placement:+d}")
        lines.append(f"  block-count family: orientation={b_or:+d} "
                     f"placement={b_pl:+d}")
        lines.append("  reference twist table")
        for key, ref in _reference_quivers():
            ref.set_calibration(make_calibration(ref, orientation, placement))
            got = ref.sd_twist_exponent(_UNIT, _ZERO2)
            lines.append(f"    edge signs {key[0]}, vertex sign {key[1]:+d}: "
                         f"twist {got} (expected {REFERENCE_TWISTS[key]})")
        ensure_calibrated(quiver, bound)
        counts = verify_calibration(quiver, bound)
        kappa = ", ".join(str(k) for k in quiver.calibration.kappa)
        lines.append("quiver calibration")
        lines.append(f"  kappa weights: ({kappa})")
        lines.append(f"  identity checks up to bound {bound}: " +
                     ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
        lines.append("reference pipeline values")
        for label, passed, detail in verify_reference_values():
            ok = ok and passed
            lines.append(f"  [{'ok' if passed else 'FAIL'}] {label}: {detail}")
    except CalibrationError as exc:
        ok = False
        lines.append(f"calibration failed: {exc}")
    return "\n".join(lines), ok
