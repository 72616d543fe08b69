import math

import numpy as np
import pytest

from convexlab.bodies import (
    BUMP_PEAK,
    BodyError,
    RevolutionBodySpec,
    ball_oracle,
    build_polytope_pair,
    bump,
    make_revolution_spec,
    oracle_of,
    profile,
    revolution_radial,
    revolution_support,
    validate_revolution_spec,
)
from convexlab.grassmann import RngStream


# ---------------------------------------------------------------------------
# bump


def test_bump_peak_and_support():
    assert bump(0.0) == pytest.approx(math.exp(-1.0), abs=1e-16)
    assert BUMP_PEAK == pytest.approx(math.exp(-1.0), abs=1e-16)
    assert bump(1.0) == 0.0
    assert bump(-1.0) == 0.0
    assert bump(1.5) == 0.0
    assert bump(-2.0) == 0.0
    u = np.linspace(-0.99, 0.99, 101)
    assert np.all(bump(u) > 0.0)


def test_bump_derivatives_match_finite_differences():
    h = 1e-6
    for u in (-0.7, -0.2, 0.0, 0.3, 0.8):
        d1 = (bump(u + h) - bump(u - h)) / (2 * h)
        d2 = (bump(u + h) - 2 * bump(u) + bump(u - h)) / h ** 2
        assert bump(u, order=1) == pytest.approx(d1, abs=5e-7)
        assert bump(u, order=2) == pytest.approx(d2, abs=5e-4)
    # smooth to all orders at the support boundary
    assert bump(1.0, order=1) == 0.0
    assert bump(1.0, order=2) == 0.0
    with pytest.raises(BodyError):
        bump(0.0, order=3)


# ---------------------------------------------------------------------------
# profiles


def test_profile_point_values():
    spec = make_revolution_spec()
    g = spec.partner()
    eps = spec.epsilon
    e1 = math.exp(-1.0)
    assert profile(spec, 1 / 3) == pytest.approx(math.sqrt(8) / 3 + eps * e1, abs=1e-15)
    assert profile(spec, 2 / 3) == pytest.approx(math.sqrt(5) / 3 + eps * e1, abs=1e-15)
    assert profile(g, 1 / 3) == pytest.approx(math.sqrt(8) / 3 + eps * e1, abs=1e-15)
    assert profile(g, 2 / 3) == pytest.approx(math.sqrt(5) / 3, abs=1e-15)
    assert profile(g, -2 / 3) == pytest.approx(math.sqrt(5) / 3 + eps * e1, abs=1e-15)
    assert profile(spec, -2 / 3) == pytest.approx(math.sqrt(5) / 3, abs=1e-15)
    assert profile(spec, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert profile(spec, 1.0) == 0.0
    assert profile(spec, -1.0) == 0.0


def test_profile_pairing_identity():
    # {f(t), f(-t)} == {g(t), g(-t)} pointwise, the geometric heart of the pair
    spec = make_revolution_spec()
    g = spec.partner()
    ts = np.linspace(-1.0, 1.0, 20_001)
    f_pos, f_neg = profile(spec, ts), profile(spec, -ts)
    g_pos, g_neg = profile(g, ts), profile(g, -ts)
    straight = np.maximum(np.abs(f_pos - g_pos), np.abs(f_neg - g_neg))
    swapped = np.maximum(np.abs(f_pos - g_neg), np.abs(f_neg - g_pos))
    assert float(np.max(np.minimum(straight, swapped))) == 0.0


def test_profiles_differ_on_variant_bump():
    spec = make_revolution_spec()
    g = spec.partner()
    ts = np.linspace(-1.0, 1.0, 20_001)
    assert float(np.max(np.abs(profile(spec, ts) - profile(g, ts)))) == pytest.approx(
        spec.epsilon * math.exp(-1.0), rel=1e-6)


def test_profile_domain_errors():
    spec = make_revolution_spec()
    with pytest.raises(BodyError):
        profile(spec, 1.5)
    with pytest.raises(BodyError):
        profile(spec, 1.0, order=1)
    assert profile(spec, 0.5, order=1) == pytest.approx(
        (profile(spec, 0.5 + 1e-7) - profile(spec, 0.5 - 1e-7)) / 2e-7, abs=1e-6)


def test_spec_validation_constraints():
    with pytest.raises(BodyError, match=r"\(0, 1/6\)"):
        RevolutionBodySpec(n=3, epsilon=1e-3, delta=0.2, variant="K")
    with pytest.raises(BodyError):
        RevolutionBodySpec(n=3, epsilon=1e-3, delta=0.0, variant="K")
    with pytest.raises(BodyError):
        RevolutionBodySpec(n=3, epsilon=-1e-3, delta=0.1, variant="K")
    with pytest.raises(BodyError):
        RevolutionBodySpec(n=1, epsilon=1e-3, delta=0.1, variant="K")
    with pytest.raises(BodyError):
        RevolutionBodySpec(n=3, epsilon=1e-3, delta=0.1, variant="M")
    # zero perturbation (the round ball) is a valid spec
    v = validate_revolution_spec(RevolutionBodySpec(n=3, epsilon=0.0, delta=0.1))
    assert v.ok and v.max_second_derivative < 0.0


def test_default_spec_is_concave_with_positive_profile():
    v = validate_revolution_spec(make_revolution_spec())
    assert v.ok
    assert v.max_second_derivative < 0.0
    assert v.min_profile > 0.0


def test_make_revolution_spec_shrinks_large_epsilon():
    spec = make_revolution_spec(epsilon=0.5)
    assert spec.epsilon < 0.5
    assert validate_revolution_spec(spec).ok


def test_partner_involution():
    spec = make_revolution_spec()
    assert spec.partner().variant == "L"
    assert spec.partner().partner() == spec


# ---------------------------------------------------------------------------
# revolution oracles


def _ray_march_radial(spec, d, lo=0.0, hi=2.0, iters=200):
    # independent check: last r with the point inside the body
    d = np.asarray(d, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        x = mid * d
        tn = x[-1]
        tp = float(np.linalg.norm(x[:-1]))
        inside = abs(tn) <= 1.0 and tp <= profile_ext(spec, tn)
        lo, hi = (mid, hi) if inside else (lo, mid)
    return 0.5 * (lo + hi)


def profile_ext(spec, t):
    if abs(t) > 1.0:
        return -1.0
    return float(profile(spec, t))


def test_revolution_radial_matches_ray_march():
    spec = make_revolution_spec()
    rng = RngStream(21, 0).generator()
    dirs = rng.standard_normal((40, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    rho = revolution_radial(spec, dirs)
    for d, r in zip(dirs, rho):
        assert r == pytest.approx(_ray_march_radial(spec, d), abs=1e-7)


def test_revolution_radial_on_axis():
    spec = make_revolution_spec()
    rho = revolution_radial(spec, np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]))
    assert np.allclose(rho, 1.0, atol=1e-12)


def test_revolution_support_dominates_boundary_samples():
    spec = make_revolution_spec()
    # the maximizer for direction d lies in the half-plane spanned by the
    # axis and d's planar part, so a 1-D t-grid per direction is exact up
    # to grid resolution
    ts = np.linspace(-1.0, 1.0, 200_001)
    radii = profile(spec, ts)
    rng = RngStream(22, 0).generator()
    dirs = rng.standard_normal((25, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    h = revolution_support(spec, dirs)
    planar = np.linalg.norm(dirs[:, :2], axis=1)
    best = (radii[None, :] * planar[:, None]
            + ts[None, :] * dirs[:, 2:3]).max(axis=1)
    assert np.all(h >= best - 1e-12)
    assert np.all(h <= best + 1e-9)


def test_revolution_support_axis_value():
    spec = make_revolution_spec()
    h = revolution_support(spec, np.array([[0.0, 0.0, 1.0]]))
    assert h[0] == pytest.approx(1.0, abs=1e-10)


def test_oracle_member_consistency():
    spec = make_revolution_spec()
    oracle = oracle_of(spec)
    rng = RngStream(23, 0).generator()
    dirs = rng.standard_normal((200, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    rho = oracle.radial(dirs)
    inside = oracle.member(0.99 * rho[:, None] * dirs)
    outside = oracle.member(1.01 * rho[:, None] * dirs)
    assert np.all(inside)
    assert not np.any(outside)


# ---------------------------------------------------------------------------
# polytope construction


def test_build_polytope_pair_counts():
    cons = build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, 1, -1])
    assert cons.vrep_K.num_vertices == 2 ** 3 - 2 + 2 * 3
    assert cons.vrep_L.num_vertices == 12
    assert cons.body_K.normals.shape == (8, 3)
    # K loses the u and v corners, L loses u and -v
    kept_k = {tuple(np.round(w, 9)) for w in cons.vrep_K.vertices}
    assert (1.0, 1.2, 1.5) not in kept_k          # u corner cut
    assert (1.0, 1.2, -1.5) not in kept_k         # v corner cut
    assert (-1.0, -1.2, -1.5) in kept_k
    kept_l = {tuple(np.round(w, 9)) for w in cons.vrep_L.vertices}
    assert (1.0, 1.2, 1.5) not in kept_l          # u corner cut
    assert (-1.0, -1.2, 1.5) not in kept_l        # -v corner cut
    assert (1.0, 1.2, -1.5) in kept_l


def test_build_polytope_pair_dimension_4():
    cons = build_polytope_pair([1.0, 1.2, 1.5, 1.8], [1, 1, 1, 1], [1, 1, 1, -1])
    assert cons.vrep_K.num_vertices == 2 ** 4 - 2 + 2 * 4


def test_build_polytope_pair_rejects_duplicate_half_widths():
    with pytest.raises(BodyError, match="pairwise distinct"):
        build_polytope_pair([1.0, 1.0, 1.5], [1, 1, 1], [1, 1, -1])


def test_build_polytope_pair_rejects_nonadjacent_vertices():
    with pytest.raises(BodyError, match="adjacent"):
        build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, -1, -1])


def test_build_polytope_pair_rejects_deep_cut_naming_bound():
    with pytest.raises(BodyError, match="largest admissible cut depth"):
        build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, 1, -1], lam=2.0)
    with pytest.raises(BodyError):
        build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, 1, -1], lam=0.0)


def test_default_cut_depth_is_half_gap():
    cons = build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, 1, -1])
    assert cons.lam == pytest.approx(1.0 / math.sqrt(3), abs=1e-15)


def test_polytope_oracle_round_trip():
    cons = build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, 1, -1])
    oracle = oracle_of(cons.body_K)
    assert oracle.kind == "polytope"
    rng = RngStream(24, 0).generator()
    dirs = rng.standard_normal((100, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    rho = oracle.radial(dirs)
    pts = rho[:, None] * dirs
    # boundary points satisfy max facet functional == offset
    slack = (cons.body_K.offsets[None, :] - pts @ cons.body_K.normals.T).min(axis=1)
    assert np.allclose(slack, 0.0, atol=1e-9)


# ---------------------------------------------------------------------------
# ball oracle


def test_ball_oracle_values():
    ball = ball_oracle(3, radius=2.0)
    dirs = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert np.allclose(ball.radial(dirs), 2.0)
    assert np.allclose(ball.support(dirs), 2.0)
    assert ball.support(np.array([[3.0, 0.0, 0.0]]))[0] == pytest.approx(6.0)
    assert ball.member(np.array([[1.9, 0.0, 0.0]]))[0]
    assert not ball.member(np.array([[2.1, 0.0, 0.0]]))[0]
    with pytest.raises(BodyError):
        ball_oracle(0)
