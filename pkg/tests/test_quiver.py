"""Self-dual quiver validation, orbit structure, dims, and exponent forms."""

from fractions import Fraction

import pytest

from quiver_dt.quiver import (
    Calibration,
    Edge,
    SelfDualQuiver,
    Slope,
    UncalibratedError,
    ValidationError,
    kronecker_variant,
    make_calibration,
    point_quiver,
    vadd,
    vsub,
)

F = Fraction


def three_vertex_mixed():
    """Swapped pair (i, k) plus a fixed vertex j, edges i->j (pair) and i->k fixed."""
    edges = [Edge("a", "i", "j"), Edge("b", "j", "k"), Edge("c", "i", "k")]
    return SelfDualQuiver(
        ["i", "j", "k"], edges,
        {"i": "k", "k": "i", "j": "j"},
        {"a": "b", "b": "a", "c": "c"},
        {"i": 1, "j": -1, "k": 1},
        {"a": 1, "b": -1, "c": 1},
    )


def test_reference_quivers_validate():
    point_quiver(1)
    point_quiver(-1)
    for signs in [(1, 1), (1, -1), (-1, -1)]:
        for u in (1, -1):
            kronecker_variant(signs, u)
    three_vertex_mixed()


def test_orbit_structure():
    q = three_vertex_mixed()
    assert q.fixed_vertices == (1,)
    assert q.vertex_pairs == ((0, 2),)
    assert q.fixed_edges == (2,)
    assert q.edge_pairs == ((0, 1),)
    k = kronecker_variant((1, -1), 1)
    assert k.fixed_vertices == ()
    assert k.vertex_pairs == ((0, 1),)
    assert k.fixed_edges == (0, 1)
    assert k.edge_pairs == ()


def test_validation_rejects_non_involutive_vertex_map():
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i", "j", "k"], [], {"i": "j", "j": "k", "k": "i"},
                       {}, {}, {})


def test_validation_rejects_broken_contravariance():
    # a fixed edge must run from the dual of its target; with the identity
    # involution a fixed edge between two distinct fixed vertices is illegal
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i", "j"], [Edge("a", "i", "j")], {}, {}, {}, {})
    # swapped edges between swapped vertices must reverse direction too
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i", "j"], [Edge("a", "i", "j"), Edge("b", "j", "i")],
                       {"i": "j", "j": "i"}, {"a": "b", "b": "a"}, {}, {})
    # sanity: the legal fixed-edge version validates
    SelfDualQuiver(["i", "j"], [Edge("a", "i", "j"), Edge("b", "i", "j")],
                   {"i": "j", "j": "i"}, {"a": "a", "b": "b"}, {}, {})


def test_validation_rejects_sign_violations():
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i", "j"], [], {"i": "j", "j": "i"}, {},
                       {"i": 1, "j": -1}, {})
    edges = [Edge("a", "i", "j"), Edge("b", "i", "j")]
    # swapped edge pair: v(a) v(b) must equal u(i) u(j) = +1 here
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i", "j"], edges, {"i": "j", "j": "i"},
                       {"a": "b", "b": "a"},
                       {"i": -1, "j": -1}, {"a": 1, "b": -1})
    SelfDualQuiver(["i", "j"], edges, {"i": "j", "j": "i"},
                   {"a": "b", "b": "a"},
                   {"i": -1, "j": -1}, {"a": 1, "b": 1})
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i"], [], {}, {}, {"i": 2}, {})


def test_validation_rejects_unknown_names():
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i"], [Edge("a", "i", "z")], {}, {}, {}, {})
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i"], [], {"z": "i"}, {}, {}, {})
    with pytest.raises(ValidationError):
        SelfDualQuiver(["i", "i"], [], {}, {}, {}, {})


def test_dual_vector_and_sd_classes():
    q = three_vertex_mixed()
    assert q.dual_vector((1, 2, 3)) == (3, 2, 1)
    assert q.is_sd_class((2, 2, 2))
    # the fixed middle vertex is symplectic, so odd entries there are illegal
    assert not q.is_sd_class((2, 1, 2))
    assert not q.is_sd_class((1, 2, 3))
    p = point_quiver(-1)
    assert p.is_sd_class((2,))
    assert not p.is_sd_class((1,))
    assert point_quiver(1).is_sd_class((1,))
    k = kronecker_variant((1, 1), 1)
    assert k.sd_classes_up_to(5) == [(0, 0), (1, 1), (2, 2)]
    assert p.sd_classes_up_to(5) == [(0,), (2,), (4,)]


def test_euler_form_frozen_values():
    k = kronecker_variant((1, 1), 1)
    assert k.euler_form((1, 0), (0, 1)) == -2
    assert k.euler_form((0, 1), (1, 0)) == 0
    assert k.euler_form((1, 1), (1, 1)) == 0
    p = point_quiver(1)
    assert p.euler_form((3,), (2,)) == 6


def test_dim_formulas_match_independent_recount():
    # independent recount via whole-quiver sums:
    #   2 * sd_dim_rep = dim_rep + sum over fixed edges of sigma_a theta_t
    #   2 * sd_dim_aut = dim_aut - sum over fixed vertices of u_i theta_i
    for q in [point_quiver(1), point_quiver(-1), kronecker_variant((1, -1), 1),
              kronecker_variant((-1, -1), -1), three_vertex_mixed()]:
        for theta in q.sd_classes_up_to(6):
            cross = sum(q.fixed_edge_sign(a) * theta[q.edge_endpoints[a][1]]
                        for a in q.fixed_edges)
            assert 2 * q.sd_dim_rep(theta) == q.dim_rep(theta) + cross
            fixed = sum(q.vertex_sign[i] * theta[i] for i in q.fixed_vertices)
            assert 2 * q.sd_dim_aut(theta) == q.dim_aut(theta) - fixed


def test_dim_frozen_values():
    k = kronecker_variant((1, 1), 1)
    assert k.dim_rep((1, 1)) == 2 and k.dim_aut((1, 1)) == 2
    assert k.sd_dim_rep((1, 1)) == 2 and k.sd_dim_aut((1, 1)) == 1
    kpm = kronecker_variant((1, -1), 1)
    assert kpm.sd_dim_rep((1, 1)) == 1
    kmm = kronecker_variant((-1, -1), 1)
    assert kmm.sd_dim_rep((1, 1)) == 0
    p = point_quiver(1)
    assert p.sd_dim_aut((2,)) == 1
    assert point_quiver(-1).sd_dim_aut((2,)) == 3


def test_exponent_forms_need_calibration():
    k = kronecker_variant((1, 1), 1)
    with pytest.raises(UncalibratedError):
        k.commutation_exponent((1, 0), (0, 1))
    with pytest.raises(UncalibratedError):
        k.sd_twist_exponent((1, 0), (0, 0))


def test_calibrated_exponent_values():
    k = kronecker_variant((1, 1), 1)
    k.set_calibration(make_calibration(k, -1, 1))
    assert k.commutation_exponent((1, 0), (0, 1)) == -2
    assert k.commutation_exponent((0, 1), (1, 0)) == 2
    assert k.sd_twist_exponent((1, 0), (0, 0)) == -2
    kpm = kronecker_variant((1, -1), 1)
    kpm.set_calibration(make_calibration(kpm, -1, 1))
    assert kpm.sd_twist_exponent((1, 0), (0, 0)) == -1
    kmm = kronecker_variant((-1, -1), 1)
    kmm.set_calibration(make_calibration(kmm, -1, 1))
    assert kmm.sd_twist_exponent((1, 0), (0, 0)) == 0


def test_kappa_weights():
    k = kronecker_variant((1, 1), 1)
    cal = make_calibration(k, -1, 1)
    assert cal.kappa == (F(-1), F(1))
    kpm = kronecker_variant((1, -1), 1)
    assert make_calibration(kpm, -1, 1).kappa == (F(0), F(0))
    p = point_quiver(-1)
    assert make_calibration(p, -1, 1).kappa == (F(0),)


def test_slopes():
    k = kronecker_variant((1, 1), 1)
    s = Slope.from_dict(k, {"i": 1, "j": -1})
    s.validate_self_dual(k)
    assert s.value((1, 0)) == 1
    assert s.value((1, 1)) == 0
    assert s.value((1, 2)) == F(-1, 3)
    bad = Slope.from_dict(k, {"i": 1, "j": 0})
    with pytest.raises(ValidationError):
        bad.validate_self_dual(k)
    p = point_quiver(1)
    with pytest.raises(ValidationError):
        Slope.from_dict(p, {"x": 1}).validate_self_dual(p)
    assert Slope.trivial(k).is_trivial()
    with pytest.raises(ValueError):
        s.value((0, 0))


def test_json_round_trip_and_defaults():
    q = three_vertex_mixed()
    data = q.to_data()
    q2 = SelfDualQuiver.from_data(data)
    assert q2.to_data() == data
    minimal = SelfDualQuiver.from_data({"vertices": ["x"], "edges": []})
    assert minimal.inv_vertex == (0,)
    assert minimal.vertex_sign == (1,)
    with pytest.raises(ValidationError):
        SelfDualQuiver.from_data({"vertices": ["i", "j"],
                                  "edges": [{"name": "a", "from": "i", "to": "q"}]})


def test_class_enumeration_is_graded_lex():
    k = kronecker_variant((1, 1), 1)
    vecs = k.dim_vectors_up_to(2)
    assert vecs == [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert vadd((1, 2), (3, 4)) == (4, 6)
    assert vsub((3, 4), (1, 2)) == (2, 2)
