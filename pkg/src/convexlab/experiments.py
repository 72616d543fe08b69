"""Runnable verifications: equality of section/projection/slab intrinsic
volumes for the constructed pairs, the slab-to-section limit, and
noncongruence certificates, each producing a structured report.

Pass rules: exact paths compare relative differences against the tolerance;
stochastic paths require every |difference| within 3 combined standard
errors plus the tolerance.  Controls (rotated / shifted copies) are wired
to FAIL the equality experiments, guarding against a harness that accepts
everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import (ConvexBodyOracle, PolytopeConstruction,
                     RevolutionBodySpec, ball_oracle, build_polytope_pair,
                     make_revolution_spec, oracle_of, profile)
from .grassmann import RngStream, Subspace, sample_haar_subspace, sample_sphere
from .intrinsic import (area_from_support_2d, centroid_3d, hull_surface_v2,
                        kubota_intrinsic_volume, mean_width_v1,
                        planar_metrics_from_oracle, volume_radial)
from .polykernel import (HPolytope, convex_hull_2d, polygon_metrics,
                         poly3_intrinsic_volumes, projection_polygon,
                         section_polygon)
from .transforms import (SlabSpec, max_slab_halfwidth,
                         projection_support_oracle, section_oracle,
                         slab_oracle, translate_oracle)


class ExperimentError(ValueError):
    """Raised for invalid experiment parameters."""


@dataclass(frozen=True)
class SampleRecord:
    """One per-sample comparison row; basis is flattened row-major."""

    id: int
    basis: tuple
    value_K: float
    value_L: float
    abs_diff: float
    rel_diff: float
    stderr: float
    extra: dict | None = None


@dataclass
class ExperimentReport:
    experiment: str
    bodies: dict
    parameters: dict
    samples: list
    summary: dict
    runtime_seconds: float = 0.0  # informational; kept out of serialized reports


def _rel(diff: float, a: float, b: float) -> float:
    scale = max(0.5 * (abs(a) + abs(b)), 1e-300)
    return diff / scale


def _judge(samples: list, tol: float) -> dict:
    """Summary statistics and the pass verdict for a list of SampleRecords."""
    if not samples:
        raise ExperimentError("experiment produced no samples")
    rels = np.array([s.rel_diff for s in samples])
    absd = np.array([s.abs_diff for s in samples])
    errs = np.array([s.stderr for s in samples])
    ok = np.where(errs == 0.0, rels <= tol, absd <= 3.0 * errs + tol)
    rule = "exact-rel" if np.all(errs == 0.0) else (
        "mc-3sigma" if np.all(errs > 0.0) else "mixed")
    return {
        "max_rel_diff": float(rels.max()),
        "mean_rel_diff": float(rels.mean()),
        "max_abs_diff": float(absd.max()),
        "pass": bool(np.all(ok)),
        "tolerance": tol,
        "rule": rule,
    }


# ---------------------------------------------------------------------------
# fixture pairs


@dataclass(frozen=True)
class BodyPair:
    """A named pair of oracles plus the expectations the suite tests against."""

    name: str
    oracle_K: ConvexBodyOracle
    oracle_L: ConvexBodyOracle
    snapshots: dict
    expect_equal_values: bool      # should the equality experiments pass?
    expect_noncongruent: bool      # is the pair genuinely noncongruent?
    smooth_specs: tuple | None = None
    construction: PolytopeConstruction | None = None


DEFAULT_HALF_WIDTHS = (1.0, 1.2, 1.5, 1.8)

PAIR_NAMES = ("smooth", "polytope", "control-rotated", "control-shifted")


def make_pair(name: str, n: int = 3) -> BodyPair:
    """Build one of the named fixture pairs in dimension n."""
    if name == "smooth":
        spec_k = make_revolution_spec(n=n)
        spec_l = spec_k.partner()
        return BodyPair(
            name, oracle_of(spec_k), oracle_of(spec_l),
            {"K": spec_k.snapshot(), "L": spec_l.snapshot()},
            expect_equal_values=True, expect_noncongruent=True,
            smooth_specs=(spec_k, spec_l),
        )
    if name == "polytope":
        a = DEFAULT_HALF_WIDTHS[:n]
        us = [1] * n
        vs = [1] * (n - 1) + [-1]
        cons = build_polytope_pair(a, us, vs)
        return BodyPair(
            name, oracle_of(cons.body_K), oracle_of(cons.body_L),
            {"K": cons.snapshot("K"), "L": cons.snapshot("L")},
            expect_equal_values=True, expect_noncongruent=True,
            construction=cons,
        )
    if name == "control-rotated":
        if n < 2:
            raise ExperimentError("rotation control needs dimension >= 2")
        cons = build_polytope_pair(DEFAULT_HALF_WIDTHS[:n], [1] * n,
                                   [1] * (n - 1) + [-1])
        q = np.eye(n)
        q[n - 2:, n - 2:] = np.array([[0.0, -1.0], [1.0, 0.0]])
        rotated = cons.body_K.rotated(q)
        return BodyPair(
            name, oracle_of(cons.body_K), oracle_of(rotated),
            {"K": cons.snapshot("K"),
             "L": {"type": "derived", "base": cons.snapshot("K"),
                   "transform": "rotate-quarter-turn"}},
            expect_equal_values=False, expect_noncongruent=False,
        )
    if name == "control-shifted":
        ball = ball_oracle(n)
        shift = np.zeros(n)
        shift[0] = 0.3
        shifted = translate_oracle(ball, shift)
        return BodyPair(
            name, ball, shifted,
            {"K": {"type": "ball", "n": n, "radius": 1.0},
             "L": {"type": "derived", "base": {"type": "ball", "n": n, "radius": 1.0},
                   "transform": "translate", "shift": [float(x) for x in shift]}},
            expect_equal_values=False, expect_noncongruent=False,
        )
    raise ExperimentError(f"unknown pair '{name}' (choose from {PAIR_NAMES})")


# ---------------------------------------------------------------------------
# Antipodal pairing (the `lemma1` command)


def lemma1_check(oracle_K: ConvexBodyOracle, oracle_L: ConvexBodyOracle,
                 n_dirs: int, tol: float, rng: RngStream,
                 snapshots: dict | None = None) -> ExperimentReport:
    """Unordered-pair equality of radial and support values at antipodes.

    For each direction xi the discrepancy is the best-pairing distance
    between {rho_K(xi), rho_K(-xi)} and {rho_L(xi), rho_L(-xi)} (likewise
    for supports).  A 10x larger batch of boundary-straddling points
    spot-checks the reflection property of the difference set directly.
    """
    if oracle_K.dim != oracle_L.dim:
        raise ExperimentError("oracles must share a dimension")
    dirs = np.array([sample_sphere(oracle_K.dim, rng.substream(j))
                     for j in range(n_dirs)])
    rho_kp = np.asarray(oracle_K.radial(dirs), dtype=float)
    rho_km = np.asarray(oracle_K.radial(-dirs), dtype=float)
    rho_lp = np.asarray(oracle_L.radial(dirs), dtype=float)
    rho_lm = np.asarray(oracle_L.radial(-dirs), dtype=float)
    h_kp = np.asarray(oracle_K.support(dirs), dtype=float)
    h_km = np.asarray(oracle_K.support(-dirs), dtype=float)
    h_lp = np.asarray(oracle_L.support(dirs), dtype=float)
    h_lm = np.asarray(oracle_L.support(-dirs), dtype=float)

    def pairing(kp, km, lp, lm):
        straight = np.maximum(np.abs(kp - lp), np.abs(km - lm))
        swapped = np.maximum(np.abs(kp - lm), np.abs(km - lp))
        return np.minimum(straight, swapped)

    d_rho = pairing(rho_kp, rho_km, rho_lp, rho_lm)
    d_h = pairing(h_kp, h_km, h_lp, h_lm)

    samples = [
        SampleRecord(j, tuple(float(x) for x in dirs[j]),
                     float(rho_kp[j]), float(rho_lp[j]),
                     float(d_rho[j]), _rel(float(d_rho[j]), rho_kp[j], rho_lp[j]),
                     0.0, extra={"d_h": float(d_h[j])})
        for j in range(n_dirs)
    ]

    # reflection spot-check at midpoint radii, where one body but not the
    # other should contain the probe whenever the radial values differ
    pts_rng = rng.substream(0x7FFF_FFFF)
    probe = pts_rng.generator().standard_normal((10 * n_dirs, oracle_K.dim))
    probe /= np.linalg.norm(probe, axis=1, keepdims=True)
    rk = np.asarray(oracle_K.radial(probe), dtype=float)
    rl = np.asarray(oracle_L.radial(probe), dtype=float)
    xs = 0.5 * (rk + rl)[:, None] * probe
    in_k = np.asarray(oracle_K.member(xs))
    in_l = np.asarray(oracle_L.member(xs))
    in_k_neg = np.asarray(oracle_K.member(-xs))
    in_l_neg = np.asarray(oracle_L.member(-xs))
    bad_kl = (in_k & ~in_l) & ~(in_l_neg & ~in_k_neg)
    bad_lk = (in_l & ~in_k) & ~(in_k_neg & ~in_l_neg)
    failures = int(np.sum(bad_kl) + np.sum(bad_lk))

    summary = _judge(samples, tol)
    max_d_rho = float(d_rho.max())
    max_d_h = float(d_h.max())
    summary.update({
        "max_d_rho": max_d_rho,
        "max_d_h": max_d_h,
        "point_check_samples": int(10 * n_dirs),
        "point_check_failures": failures,
        "rule": "lemma1-absolute",
        "pass": bool(max_d_rho <= tol and max_d_h <= tol and failures == 0),
    })
    return ExperimentReport(
        "lemma1", snapshots or {}, {
            "samples": n_dirs, "seed": rng.seed, "tol": tol,
            "dimension": oracle_K.dim,
        }, samples, summary)


# ---------------------------------------------------------------------------
# Sections


def _section_hpoly(poly: HPolytope, sub: Subspace) -> HPolytope:
    """Exact H-representation of a k=3 central section, in subspace coords."""
    ms = poly.normals @ sub.basis
    lens = np.linalg.norm(ms, axis=1)
    live = lens > 1e-12
    return HPolytope(ms[live] / lens[live, None], poly.offsets[live] / lens[live])


def _section_value(oracle: ConvexBodyOracle, sub: Subspace, i: int,
                   polyline_n: int, kubota_m: int,
                   rng: RngStream) -> tuple[float, float, str]:
    """(value, stderr, method) for V_i of the section oracle|span(sub)."""
    k = sub.dim
    if k == 1:
        b = sub.basis[:, 0]
        length = float(oracle.radial(b)) + float(oracle.radial(-b))
        return length, 0.0, "exact-segment"
    if oracle.polytope is not None and k == 2:
        area, perim = polygon_metrics(section_polygon(oracle.polytope, sub))
        return (area if i == 2 else perim / 2.0), 0.0, "exact-polygon"
    if oracle.polytope is not None and k == 3:
        vals = poly3_intrinsic_volumes(_section_hpoly(oracle.polytope, sub))
        return vals[i - 1], 0.0, "exact-poly3"
    sec = section_oracle(oracle, sub)
    if k == 2:
        est = planar_metrics_from_oracle(sec, polyline_n)[i - 1]
        return est.value, est.stderr, est.method
    est = kubota_intrinsic_volume(sec, k, i, kubota_m, rng)
    return est.value, est.stderr, est.method


def sections_experiment(oracle_K: ConvexBodyOracle, oracle_L: ConvexBodyOracle,
                        k: int, i: int, num_h: int, rng: RngStream, tol: float,
                        polyline_n: int = 8192, kubota_m: int = 64,
                        snapshots: dict | None = None) -> ExperimentReport:
    """V_i(K cap H) vs V_i(L cap H) over Haar-random k-subspaces H."""
    n = oracle_K.dim
    if oracle_L.dim != n:
        raise ExperimentError("oracles must share a dimension")
    if not 1 <= i <= k <= n - 1:
        raise ExperimentError(f"need 1 <= i <= k <= n-1, got i={i}, k={k}, n={n}")
    samples = []
    methods = set()
    for j in range(num_h):
        sub_rng = rng.substream(j)
        sub = sample_haar_subspace(n, k, sub_rng)
        vk, sk, mk = _section_value(oracle_K, sub, i, polyline_n, kubota_m,
                                    sub_rng.substream(1))
        vl, sl, ml = _section_value(oracle_L, sub, i, polyline_n, kubota_m,
                                    sub_rng.substream(2))
        methods.update((mk, ml))
        diff = abs(vk - vl)
        samples.append(SampleRecord(
            j, tuple(float(x) for x in sub.basis.flatten()),
            vk, vl, diff, _rel(diff, vk, vl), sk + sl))
    summary = _judge(samples, tol)
    summary["methods"] = sorted(methods)
    return ExperimentReport(
        "sections", snapshots or {}, {
            "k": k, "i": i, "samples": num_h, "seed": rng.seed, "tol": tol,
            "polyline_n": polyline_n, "dimension": n,
        }, samples, summary)


# ---------------------------------------------------------------------------
# Slabs


def _poly_slab_values(oracle: ConvexBodyOracle, spec: SlabSpec) -> tuple[float, float, float]:
    slab = slab_oracle(oracle, spec)
    if slab.dim == 3:
        return poly3_intrinsic_volumes(slab.polytope, slab.vrep)
    if slab.dim == 2:
        hull = convex_hull_2d(slab.vrep.vertices)
        area, perim = polygon_metrics(hull)
        return (perim / 2.0, area, 0.0)
    raise ExperimentError("exact slab path supports dimensions 2 and 3")


def _slab_value(oracle: ConvexBodyOracle, spec: SlabSpec, i: int,
                vol_nodes: int, width_nodes: int,
                hull_nodes: int) -> tuple[float, float, str]:
    n = oracle.dim
    if oracle.polytope is not None and n in (2, 3):
        vals = _poly_slab_values(oracle, spec)
        return vals[i - 1], 0.0, "exact-poly3" if n == 3 else "exact-polygon"
    slab = slab_oracle(oracle, spec)
    if i == n:
        est = volume_radial(slab, n, nodes=vol_nodes)
    elif i == 1 and n == 3:
        est = mean_width_v1(slab, nodes=width_nodes)
    elif i == 2 and n == 3:
        est = hull_surface_v2(slab, nodes=hull_nodes)
    else:
        raise ExperimentError(f"no slab estimator for i={i} in dimension {n}")
    return est.value, est.stderr, est.method


def slab_experiment(oracle_K: ConvexBodyOracle, oracle_L: ConvexBodyOracle,
                    t: float, i: int, num_xi: int, rng: RngStream, tol: float,
                    vol_nodes: int = 200_000, width_nodes: int = 512,
                    hull_nodes: int = 20_000,
                    snapshots: dict | None = None) -> ExperimentReport:
    """V_i(K cap S_t(xi)) vs V_i(L cap S_t(xi)) over random slab normals."""
    n = oracle_K.dim
    if not 1 <= i <= n:
        raise ExperimentError(f"need 1 <= i <= n, got i={i}, n={n}")
    t_max = min(max_slab_halfwidth(oracle_K), max_slab_halfwidth(oracle_L))
    if not 0.0 < t <= t_max:
        raise ExperimentError(
            f"slab half-width {t} outside (0, {t_max:.9g}] (max admissible t)")
    samples = []
    methods = set()
    for j in range(num_xi):
        xi = sample_sphere(n, rng.substream(j))
        spec = SlabSpec(xi, t)
        vk, sk, mk = _slab_value(oracle_K, spec, i, vol_nodes, width_nodes, hull_nodes)
        vl, sl, ml = _slab_value(oracle_L, spec, i, vol_nodes, width_nodes, hull_nodes)
        methods.update((mk, ml))
        diff = abs(vk - vl)
        samples.append(SampleRecord(
            j, tuple(float(x) for x in xi), vk, vl, diff,
            _rel(diff, vk, vl), sk + sl))
    summary = _judge(samples, tol)
    summary["methods"] = sorted(methods)
    return ExperimentReport(
        "slabs", snapshots or {}, {
            "t": t, "i": i, "samples": num_xi, "seed": rng.seed, "tol": tol,
            "dimension": n,
        }, samples, summary)


# ---------------------------------------------------------------------------
# Projections


def _projection_value(oracle: ConvexBodyOracle, sub: Subspace, area_n: int) -> tuple[float, float, str]:
    k = sub.dim
    if k == 1:
        u = sub.basis[:, 0]
        w = float(oracle.support(u)) + float(oracle.support(-u))
        return w, 0.0, "exact-width"
    if k == 2:
        if oracle.vrep is not None:
            q = projection_polygon(oracle.vrep, sub)
            return polygon_metrics(q)[0], 0.0, "exact-polygon"
        proj = projection_support_oracle(oracle, sub)
        return area_from_support_2d(proj, area_n), 0.0, "quadrature"
    if k == 3 and oracle.vrep is not None:
        from scipy.spatial import ConvexHull
        return float(ConvexHull(oracle.vrep.vertices @ sub.basis).volume), 0.0, "exact-hull"
    raise ExperimentError(f"no projection-volume path for k={k} on {oracle.kind}")


def projections_experiment(oracle_K: ConvexBodyOracle, oracle_L: ConvexBodyOracle,
                           k: int, num_h: int, rng: RngStream, tol: float,
                           area_n: int = 8192,
                           snapshots: dict | None = None) -> ExperimentReport:
    """vol_k(K|V) vs vol_k(L|V) over Haar-random k-subspaces V."""
    n = oracle_K.dim
    if not 1 <= k <= n - 1:
        raise ExperimentError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    samples = []
    methods = set()
    for j in range(num_h):
        sub = sample_haar_subspace(n, k, rng.substream(j))
        vk, sk, mk = _projection_value(oracle_K, sub, area_n)
        vl, sl, ml = _projection_value(oracle_L, sub, area_n)
        methods.update((mk, ml))
        diff = abs(vk - vl)
        samples.append(SampleRecord(
            j, tuple(float(x) for x in sub.basis.flatten()), vk, vl, diff,
            _rel(diff, vk, vl), sk + sl))
    summary = _judge(samples, tol)
    summary["methods"] = sorted(methods)
    return ExperimentReport(
        "projections", snapshots or {}, {
            "k": k, "samples": num_h, "seed": rng.seed, "tol": tol,
            "dimension": n,
        }, samples, summary)


# ---------------------------------------------------------------------------
# slab-to-section convergence


def convergence_experiment(oracle: ConvexBodyOracle, xi: np.ndarray, i: int,
                           t_sequence, polyline_n: int = 8192,
                           vol_nodes: int = 100_000, width_nodes: int = 512,
                           hull_nodes: int = 20_000,
                           snapshots: dict | None = None) -> ExperimentReport:
    """V_i(K cap S_t(xi)) against the central-section value as t shrinks.

    Passes when the differences decrease monotonically (up to estimator
    noise) and the final difference is consistent with linear decay in t.
    """
    n = oracle.dim
    if not 1 <= i <= n - 1:
        raise ExperimentError(f"need 1 <= i <= n-1, got i={i}, n={n}")
    ts = [float(t) for t in t_sequence]
    if len(ts) < 2 or any(b >= a for a, b in zip(ts, ts[1:])) or ts[-1] <= 0.0:
        raise ExperimentError("t sequence must be strictly decreasing and positive")
    t_max = max_slab_halfwidth(oracle)
    if ts[0] > t_max:
        raise ExperimentError(f"largest t {ts[0]} exceeds max admissible {t_max:.9g}")
    xi = np.asarray(xi, dtype=float)

    # section value through the hyperplane orthogonal to xi
    comp = _orthogonal_complement(xi)
    sub = Subspace(comp)
    if oracle.polytope is not None and sub.dim == 2:
        area, perim = polygon_metrics(section_polygon(oracle.polytope, sub))
        sec_value, sec_err = (area if i == 2 else perim / 2.0), 0.0
    elif sub.dim == 2:
        est = planar_metrics_from_oracle(section_oracle(oracle, sub), polyline_n)[i - 1]
        sec_value, sec_err = est.value, est.stderr
    else:
        raise ExperimentError("convergence experiment supports n = 3")

    samples = []
    diffs, errs = [], []
    for j, t in enumerate(ts):
        vk, sk, _ = _slab_value(oracle, SlabSpec(xi, t), i,
                                vol_nodes, width_nodes, hull_nodes)
        d = vk - sec_value
        diffs.append(d)
        errs.append(sk + sec_err)
        samples.append(SampleRecord(
            j, (t,), vk, sec_value, abs(d), _rel(abs(d), vk, sec_value), sk + sec_err))

    slack = [3.0 * e + 1e-12 for e in errs]
    monotone = all(diffs[j + 1] <= diffs[j] + slack[j] + slack[j + 1]
                   for j in range(len(ts) - 1))
    nonneg = all(d >= -s for d, s in zip(diffs, slack))
    ratio_c = max(max(d, 0.0) / t for d, t in zip(diffs, ts))
    final_ok = diffs[-1] <= ratio_c * ts[-1] + slack[-1]
    summary = {
        "section_value": sec_value,
        "diffs": [float(d) for d in diffs],
        "fitted_C": float(ratio_c),
        "monotone": bool(monotone),
        "pass": bool(monotone and nonneg and final_ok),
        "tolerance": 0.0,
        "max_rel_diff": float(max(s.rel_diff for s in samples)),
        "mean_rel_diff": float(np.mean([s.rel_diff for s in samples])),
        "max_abs_diff": float(max(s.abs_diff for s in samples)),
        "rule": "monotone-decay",
    }
    return ExperimentReport(
        "convergence", snapshots or {}, {
            "i": i, "t_sequence": ts, "xi": [float(x) for x in xi],
            "dimension": n,
        }, samples, summary)


def _orthogonal_complement(xi: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the hyperplane orthogonal to xi."""
    from scipy.linalg import null_space

    u = xi / np.linalg.norm(xi)
    return null_space(u.reshape(1, -1))


# ---------------------------------------------------------------------------
# noncongruence certificates


@dataclass(frozen=True)
class NoncongruenceCertificate:
    method: str    # vertex-distance-multiset | profile-mismatch | harmonic-spectrum
    statistic: float
    threshold: float
    verdict: str   # noncongruent | inconclusive
    assumptions: tuple

    def __post_init__(self):
        if self.verdict not in ("noncongruent", "inconclusive"):
            raise ExperimentError("verdict must be noncongruent or inconclusive")
        if self.verdict == "noncongruent" and not self.statistic > self.threshold:
            raise ExperimentError("noncongruent verdict requires statistic > threshold")


def _verdict(statistic: float, threshold: float) -> str:
    return "noncongruent" if statistic > threshold else "inconclusive"


def _vertex_distance_certificate(vrep_K, vrep_L) -> NoncongruenceCertificate:
    """Isometries preserve the multiset of pairwise vertex distances."""
    from scipy.spatial.distance import pdist

    def signature(v):
        centered = v - v.mean(axis=0)
        return np.sort(pdist(centered))

    sig_k, sig_l = signature(vrep_K.vertices), signature(vrep_L.vertices)
    if sig_k.size != sig_l.size:
        stat = 1.0
    else:
        stat = float(np.max(np.abs(sig_k - sig_l)))
    thr = 1e-6
    return NoncongruenceCertificate(
        "vertex-distance-multiset", stat, thr, _verdict(stat, thr),
        ("congruence maps vertices to vertices, preserving all pairwise distances",))


def _profile_certificate(spec_K: RevolutionBodySpec,
                         spec_L: RevolutionBodySpec) -> NoncongruenceCertificate:
    """Sup-distance between generating profiles, up to the axis flip."""
    ts = np.linspace(-1.0, 1.0, 100_000)
    f = profile(spec_K, ts)
    g = profile(spec_L, ts)
    stat = float(min(np.max(np.abs(f - g)), np.max(np.abs(f - g[::-1]))))
    thr = spec_K.epsilon * math.exp(-1.0) / 2.0
    return NoncongruenceCertificate(
        "profile-mismatch", stat, thr, _verdict(stat, thr),
        ("any isometry between non-spherical bodies of revolution maps the "
         "symmetry axis to the symmetry axis",))


def _harmonic_certificate(oracle_K: ConvexBodyOracle, oracle_L: ConvexBodyOracle,
                          degree: int = 16, n_theta: int = 256,
                          n_phi: int = 512) -> NoncongruenceCertificate:
    """Rotation-invariant spherical-harmonic energy spectra of the radial
    functions, after centroid centering (translation-invariant as well)."""
    energies = []
    for oracle in (oracle_K, oracle_L):
        centered = translate_oracle(oracle, centroid_3d(oracle))
        energies.append(_radial_energy_spectrum(centered, degree, n_theta, n_phi))
    stat = float(np.max(np.abs(energies[0] - energies[1])))
    thr = 1e-6
    return NoncongruenceCertificate(
        "harmonic-spectrum", stat, thr, _verdict(stat, thr),
        ("per-degree harmonic energies of the centered radial function are "
         "invariant under every isometry fixing the centroid",))


def _radial_energy_spectrum(oracle: ConvexBodyOracle, degree: int,
                            n_theta: int, n_phi: int) -> np.ndarray:
    try:
        from scipy.special import sph_harm_y
    except ImportError:  # older scipy: sph_harm(m, n, azimuth, polar)
        from scipy.special import sph_harm

        def sph_harm_y(ell, m, theta, phi):
            return sph_harm(m, ell, phi, theta)

    z_nodes, z_weights = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(z_nodes)                       # polar angle nodes
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    dirs = np.column_stack([
        (np.sin(tt) * np.cos(pp)).ravel(),
        (np.sin(tt) * np.sin(pp)).ravel(),
        np.cos(tt).ravel(),
    ])
    rho = np.asarray(oracle.radial(dirs), dtype=float).reshape(n_theta, n_phi)
    weighted = rho * (z_weights[:, None] * (2.0 * np.pi / n_phi))
    out = np.zeros(degree + 1)
    # real rho: |a_{l,-m}| = |a_{l,m}|, so only m >= 0 is evaluated
    for ell in range(degree + 1):
        for m in range(ell + 1):
            coeff = np.sum(weighted * np.conj(sph_harm_y(ell, m, tt, pp)))
            out[ell] += (1.0 if m == 0 else 2.0) * float(np.abs(coeff) ** 2)
    return out


def noncongruence_certificates(pair: BodyPair) -> list:
    """Necessary-condition certificates; verdicts are one-way by design.

    The harmonic spectrum is a fallback: it runs only when no primary
    method was conclusive, and only for bodies without facet kinks (the
    fixed quadrature grid resolves smooth radial functions to well below
    the decision threshold, but not piecewise-smooth ones).
    """
    certs = []
    if pair.construction is not None or (
            pair.oracle_K.vrep is not None and pair.oracle_L.vrep is not None):
        certs.append(_vertex_distance_certificate(pair.oracle_K.vrep,
                                                  pair.oracle_L.vrep))
    if pair.smooth_specs is not None:
        certs.append(_profile_certificate(*pair.smooth_specs))
    if (not any(c.verdict == "noncongruent" for c in certs)
            and pair.oracle_K.dim == 3 and pair.oracle_L.dim == 3
            and pair.oracle_K.polytope is None and pair.oracle_L.polytope is None):
        certs.append(_harmonic_certificate(pair.oracle_K, pair.oracle_L))
    if not certs:
        raise ExperimentError("no certificate method applies to this pair")
    return certs


def certify_report(pair: BodyPair) -> ExperimentReport:
    """Wrap the certificate battery in a report; pass means the verdicts
    match the pair's known congruence status."""
    certs = noncongruence_certificates(pair)
    found = any(c.verdict == "noncongruent" for c in certs)
    ok = found if pair.expect_noncongruent else not found
    summary = {
        "noncongruent": found,
        "expected_noncongruent": pair.expect_noncongruent,
        "pass": bool(ok),
        "tolerance": 0.0,
        "max_rel_diff": 0.0,
        "mean_rel_diff": 0.0,
        "max_abs_diff": 0.0,
        "rule": "certificates",
        "certificates": [{
            "method": c.method,
            "statistic": c.statistic,
            "threshold": c.threshold,
            "verdict": c.verdict,
            "assumptions": list(c.assumptions),
        } for c in certs],
    }
    return ExperimentReport("certify", pair.snapshots, {"pair": pair.name},
                            [], summary)
