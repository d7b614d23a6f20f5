"""Numerical certification of the bundle geometry.

Each check takes a :class:`CheckSpec`, draws its random inputs from a
generator seeded with ``spec.seed`` and returns a :class:`CheckReport` with
the largest residual seen and the inputs that produced it.
"""

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import bundle as bd
from . import so3
from .exceptions import AdmissibilityError
from .manifold import (
    VectorField,
    apply_riemann,
    covariant_derivative,
    euclidean,

    gram,
    riemann_tensor,
    sphere2_stereographic,
)

MANIFOLDS = ("euclidean_n", "sphere2_stereographic", "so3")
TOL_ANALYTIC = 1e-12
TOL_FIRST_ORDER = 1e-8
TOL_SECOND_ORDER = 1e-4


@dataclass(frozen=True)
class CheckSpec:
    """What to run.

    ``weights`` is a triple, a :class:`~tbgeo.bundle.MetricWeights`, a list of
    triples (cycled over samples) or ``None`` for random admissible weights
    per sample. ``tolerance=None`` picks the check's default.
    """

    check_id: str
    manifold: str = "sphere2_stereographic"
    weights: object = None
    tolerance: float = None
    sample_count: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.check_id not in CHECKS:
            raise ValueError(f"unknown check {self.check_id!r}; known: {sorted(CHECKS)}")
        if self.tolerance is not None and not self.tolerance >= 0:
            raise ValueError("tolerance must be non-negative")
        if int(self.sample_count) < 1:
            raise ValueError("sample_count must be at least 1")


@dataclass
class CheckReport:
    check_id: str
    manifold: str
    passed: bool
    max_residual: float
    tolerance: float
    samples_run: int
    seed: int
    worst_case_inputs: dict = field(default_factory=dict)
    error: str = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "check_id": self.check_id,
            "manifold": self.manifold,
            "pass": self.passed,
            "max_residual": _json_float(self.max_residual),
            "tolerance": self.tolerance,
            "samples_run": self.samples_run,
            "seed": self.seed,
            "worst_case_inputs": self.worst_case_inputs,
            "error": self.error,
            "details": self.details,
        }


def _json_float(x):
    return float(x) if math.isfinite(x) else None


def _plain(v):
    if isinstance(v, bd.MetricWeights):
        return list(v.as_tuple())
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


class _Worst:
    """Running maximum of residuals, remembering the inputs of the worst one."""

    def __init__(self):
        self.value = -math.inf
        self.inputs = {}
        self.count = 0

    def update(self, residual, **inputs):
        self.count += 1
        residual = float(residual)
        if not math.isfinite(residual):
            residual = math.inf
        if residual > self.value:
            self.value = residual
            self.inputs = {k: _plain(v) for k, v in inputs.items()}

    def report(self, spec, tolerance, **details):
        if spec.weights is not None:
            details = {"weights": spec.weights, **details}
        return CheckReport(
            spec.check_id,
            spec.manifold,
            bool(self.value < tolerance),
            self.value,
            tolerance,
            self.count,
            spec.seed,
            self.inputs,
            details={k: _plain(v) for k, v in details.items()},
        )


# --- sampling ---------------------------------------------------------------


def make_manifold(name):
    """Build a chart manifold from its identifier.

    ``euclidean`` / ``euclidean_<n>``, ``sphere2_stereographic`` (analytic
    overrides), ``sphere2_stereographic_fd`` (finite differences only),
    ``so3`` (exponential chart).
    """
    if name == "euclidean":
        return euclidean(2)
    m = re.fullmatch(r"euclidean_(\d+)", name)
    if m:
        return euclidean(int(m.group(1)))
    if name == "sphere2_stereographic":
        return sphere2_stereographic()
    if name == "sphere2_stereographic_fd":
        return sphere2_stereographic(analytic=False)
    if name == "so3":
        return so3.so3_exponential_chart()
    raise ValueError(f"unknown manifold {name!r}")


def random_weights(rng):
    m1 = rng.uniform(0.2, 3.0)
    m3 = rng.uniform(0.2, 3.0)
    m2 = rng.uniform(-0.95, 0.95) * math.sqrt(m1 * m3)
    return bd.MetricWeights(m1, m2, m3)


def _weight_stream(spec, rng):
    w = spec.weights
    if w is None:
        while True:
            yield random_weights(rng)
    if isinstance(w, bd.MetricWeights):
        w = [w]
    elif len(w) == 3 and np.isscalar(w[0]):
        w = [w]
    cells = [bd.validate_weights(*_plain(c)) if not isinstance(c, bd.MetricWeights) else c for c in w]
    while True:
        yield from cells


def random_polynomial_field(rng, n, scale=0.5):
    """Quadratic field a + Bx + C[x, x] with its exact Jacobian."""
    a = rng.normal(size=n) * scale
    B = rng.normal(size=(n, n)) * scale
    C = rng.normal(size=(n, n, n)) * scale
    C = 0.5 * (C + C.transpose(0, 2, 1))
    return VectorField(
        lambda x: a + B @ x + np.einsum("kij,i,j->k", C, x, x),
        lambda x: B + 2.0 * np.einsum("kij,j->ki", C, x),
    )


def random_general_field(rng, n, scale=0.4):
    """Bundle field (x, u) -> (A, B), quadratic in the induced coordinates."""
    comp = random_polynomial_field(rng, 2 * n, scale)

    def fn(x, u):
        v = comp(np.concatenate([x, u]))
        return v[:n], v[n:]

    return fn


def _random_fiber_field(rng, scale=0.4):
    """Body vector function of omega, with its Jacobian."""
    f = random_polynomial_field(rng, 3, scale)
    return f, f.jacobian


# --- checks -----------------------------------------------------------------


def _inadmissible(spec, tolerance, exc):
    return CheckReport(
        spec.check_id, spec.manifold, False, math.inf, tolerance, 0, spec.seed,
        error=f"{type(exc).__name__}: {exc}",
    )


def check_positive_definite(spec):
    """Margin of positivity of gbar over random tangents.

    The residual is minus the smallest of the Rayleigh quotient
    gbar(Z, Z) / (|A|^2 + |B|^2) and the smallest eigenvalue of the weight
    matrix, so the check passes (default threshold 0) only for strictly
    positive margins.
    """
    tol = 0.0 if spec.tolerance is None else spec.tolerance
    rng = np.random.default_rng(spec.seed)
    M = make_manifold(spec.manifold)
    n = M.dimension
    worst = _Worst()
    try:
        weights = _weight_stream(spec, rng)
        for _ in range(spec.sample_count):
            w = next(weights)
            p = M.sample_point(rng)
            u = rng.normal(size=n)
            P = bd.BundlePoint(p, u)
            Z = bd.BundleTangent(rng.normal(size=(64, n)), rng.normal(size=(64, n)))
            G = gram(M, p)
            norm = np.einsum("...i,ij,...j->...", Z.horizontal, G, Z.horizontal) + np.einsum(
                "...i,ij,...j->...", Z.vertical, G, Z.vertical
            )
            quotient = bd.bundle_metric(w, M, P, Z, Z) / norm
            eig = np.linalg.eigvalsh(bd.weight_matrix(w, n)).min()
            margin = min(quotient.min(), eig)
            worst.update(-margin, weights=w, point=p, fiber=u)
    except AdmissibilityError as exc:
        return _inadmissible(spec, tol, exc)
    return worst.report(spec, tol)


def check_koszul_items(spec):
    """Closed-form connection against the eight Koszul pairings."""
    tol = TOL_FIRST_ORDER if spec.tolerance is None else spec.tolerance
    rng = np.random.default_rng(spec.seed)
    M = make_manifold(spec.manifold)
    n = M.dimension
    worst = _Worst()
    per_item = np.zeros(len(bd.KOSZUL_ITEMS))
    try:
        weights = _weight_stream(spec, rng)
        for _ in range(spec.sample_count):
            w = next(weights)
            p = M.sample_point(rng)
            u = rng.normal(size=n)
            P = bd.BundlePoint(p, u)
            X, Y, Z = (random_polynomial_field(rng, n) for _ in range(3))
            rhs = bd.koszul_pairings_oracle(w, M, P, X, Y, Z)
            Zp = Z(p)
            for k, (kd, kf, kz) in enumerate(bd.KOSZUL_ITEMS):
                conn = bd.lc_connection_lifts(w, M, P, X, Y, kd, kf)
                lhs = 2.0 * bd.bundle_metric(w, M, P, conn, bd.lift(Zp, P, kz))
                r = abs(lhs - rhs[k])
                per_item[k] = max(per_item[k], r)
                worst.update(r, item=k + 1, weights=w, point=p, fiber=u, X=X(p), Y=Y(p), Z=Zp)
    except AdmissibilityError as exc:
        return _inadmissible(spec, tol, exc)
    return worst.report(spec, tol, per_item_max=per_item.tolist())


def _chart_torsion_and_compat(spec, M, rng, worst):
    n = M.dimension
    weights = _weight_stream(spec, rng)
    torsion = compat = 0.0
    h = M.fd_step
    for _ in range(spec.sample_count):
        w = next(weights)
        p = M.sample_point(rng)
        u = rng.normal(size=n)
        P = bd.BundlePoint(p, u)
        X, Y = random_polynomial_field(rng, n), random_polynomial_field(rng, n)
        for kx, ky in product("hv", repeat=2):
            lhs = bd.lc_connection_lifts(w, M, P, X, Y, kx, ky) - bd.lc_connection_lifts(
                w, M, P, Y, X, ky, kx
            )
            r = np.max(np.abs((lhs - bd.lift_bracket_oracle(M, X, Y, P, kx, ky)).as_array()))
            torsion = max(torsion, r)
            worst.update(r, kind="torsion", lifts=kx + ky, weights=w, point=p, fiber=u)

        # metric compatibility along the chart line through (p, u)
        fY, fZ = random_general_field(rng, n), random_general_field(rng, n)
        xdot, udot = rng.normal(size=n), rng.normal(size=n)
        Mw = np.array([[w.m1, w.m2], [w.m2, w.m3]])

        def pairing(t):
            x, v = p + t * xdot, u + t * udot
            G = np.asarray(M.metric_fn(x), dtype=float)
            a = np.stack(fY(x, v))
            b = np.stack(fZ(x, v))
            return np.einsum("ab,ai,ij,bj->", Mw, a, G, b)

        d_dt = (pairing(h) - pairing(-h)) / (2.0 * h)
        direction = bd.chart_to_bundle_tangent(M, P, xdot, udot)
        dY = bd.lc_connection_general(w, M, P, direction, bd.decompose_general_field(M, P, fY))
        dZ = bd.lc_connection_general(w, M, P, direction, bd.decompose_general_field(M, P, fZ))
        Yb = bd.BundleTangent(*fY(p, u))
        Zb = bd.BundleTangent(*fZ(p, u))
        rhs = bd.bundle_metric(w, M, P, dY, Zb) + bd.bundle_metric(w, M, P, Yb, dZ)
        r = abs(d_dt - rhs)
        compat = max(compat, r)
        worst.update(r, kind="compatibility", weights=w, point=p, fiber=u, xdot=xdot, udot=udot)
    return torsion, compat


def so3_lift_bracket(omega, zeta, eta, alpha, beta):
    """[X, Y] of left-invariant lifted fields on TSO(3), body (dpi, K) parts."""
    h = so3.cross(zeta, alpha)
    v = (
        -so3.so3_curvature(zeta, alpha, omega)
        + 0.5 * so3.cross(zeta, beta)
        - 0.5 * so3.cross(alpha, eta)
    )
    return h, v


def so3_compatibility_residual(w, rng, correction="fiber_rate"):
    """One random metric-compatibility trial on TSO(3) with fiber-varying fields.

    Curve: R(t) = R0 exp(t hat(zeta)), omega(t) quadratic in t. Fields have
    body parts that are quadratic functions of omega. ``correction`` selects
    the fiber-derivative term: ``"fiber_rate"`` (Jacobian applied to the
    change of omega), ``"eta"`` (Jacobian applied to eta) or ``"none"``.
    The last two exist as negative controls.
    """
    R0 = so3.exp_so3(rng.normal(size=3))
    zeta = rng.normal(size=3)
    o0, o1, o2 = rng.normal(size=(3, 3))
    fields = [_random_fiber_field(rng) for _ in range(4)]
    (fa, Ja), (fb, Jb), (fc, Jc), (fd, Jd) = fields

    def pairing(t):
        o = o0 + t * o1 + t * t * o2
        return so3.tso3_metric(w, fa(o), fb(o), fc(o), fd(o))

    h = 1e-5
    d_dt = (pairing(h) - pairing(-h)) / (2.0 * h)
    eta = o1 + 0.5 * so3.cross(zeta, o0)
    if correction not in ("fiber_rate", "eta", "none"):
        raise ValueError(f"unknown correction {correction!r}")
    keep = correction != "none"
    zero = np.zeros((3, 3))
    Yf = so3.LeftInvariantBundleField(fa(o0), fb(o0), Ja(o0) if keep else zero, Jb(o0) if keep else zero)
    Zf = so3.LeftInvariantBundleField(fc(o0), fd(o0), Jc(o0) if keep else zero, Jd(o0) if keep else zero)
    odot = eta if correction == "eta" else None
    HY, VY = so3.tso3_connection_general(w, R0, o0, zeta, eta, Yf, omegadot=odot)
    HZ, VZ = so3.tso3_connection_general(w, R0, o0, zeta, eta, Zf, omegadot=odot)
    b = lambda m: so3.to_body(R0, m)  # noqa: E731
    rhs = so3.tso3_metric(w, b(HY), b(VY), Zf.alpha, Zf.beta) + so3.tso3_metric(
        w, Yf.alpha, Yf.beta, b(HZ), b(VZ)
    )
    return abs(d_dt - rhs), {"R0": R0, "zeta": zeta, "omega": o0, "omegadot": o1}


def _so3_torsion_and_compat(spec, rng, worst):
    weights = _weight_stream(spec, rng)
    torsion = compat = 0.0
    for _ in range(spec.sample_count):
        w = next(weights)
        R = so3.exp_so3(rng.normal(size=3))
        omega, zeta, eta, alpha, beta = rng.normal(size=(5, 3))
        H1, V1 = so3.tso3_connection_left_invariant(w, R, omega, zeta, eta, alpha, beta)
        H2, V2 = so3.tso3_connection_left_invariant(w, R, omega, alpha, beta, zeta, eta)
        bh, bv = so3_lift_bracket(omega, zeta, eta, alpha, beta)
        r = max(
            np.max(np.abs(so3.to_body(R, H1 - H2) - bh)),
            np.max(np.abs(so3.to_body(R, V1 - V2) - bv)),
        )
        torsion = max(torsion, r)
        worst.update(r, kind="torsion", weights=w, omega=omega, zeta=zeta, eta=eta)
        r, inputs = so3_compatibility_residual(w, rng)
        compat = max(compat, r)
        worst.update(r, kind="compatibility", weights=w, **inputs)
    return torsion, compat


def check_torsion_and_compatibility(spec):
    """Torsion-freeness against lift brackets, and metric compatibility by finite differences."""
    tol = TOL_SECOND_ORDER if spec.tolerance is None else spec.tolerance
    rng = np.random.default_rng(spec.seed)
    worst = _Worst()
    try:
        if spec.manifold == "so3":
            torsion, compat = _so3_torsion_and_compat(spec, rng, worst)
        else:
            torsion, compat = _chart_torsion_and_compat(spec, make_manifold(spec.manifold), rng, worst)
    except AdmissibilityError as exc:
        return _inadmissible(spec, tol, exc)
    return worst.report(spec, tol, torsion_max=torsion, compatibility_max=compat)


def check_christoffel_oracle(spec):
    """Closed-form connection against Christoffels of the induced chart metric.

    Each sample checks a lift-decomposable field A^h + B^v and a general
    fiber-varying field.
    """
    tol = TOL_SECOND_ORDER if spec.tolerance is None else spec.tolerance
    rng = np.random.default_rng(spec.seed)
    M = make_manifold(spec.manifold)
    n = M.dimension
    worst = _Worst()
    try:
        weights = _weight_stream(spec, rng)
        for _ in range(spec.sample_count):
            w = next(weights)
            p = M.sample_point(rng)
            u = rng.normal(size=n)
            P = bd.BundlePoint(p, u)
            chart = bd.BundleChart(M, w)
            direction = bd.BundleTangent(rng.normal(size=n), rng.normal(size=n))
            A, B = random_polynomial_field(rng, n), random_polynomial_field(rng, n)
            hA, vB = chart.lifted_field(A, "h"), chart.lifted_field(B, "v")
            lifted = VectorField(lambda z: hA(z) + vB(z), fd_step=M.fd_step)
            ref = bd.lc_connection_bundle(w, M, P, direction.horizontal, direction.vertical, A, B)
            brute = bd.brute_force_connection(w, M, P, direction, lifted)
            r = np.max(np.abs((ref - brute).as_array()))
            worst.update(r, kind="lifted", weights=w, point=p, fiber=u,
                         F=direction.horizontal, G=direction.vertical)

            fn = random_general_field(rng, n)
            ref = bd.lc_connection_general(w, M, P, direction, bd.decompose_general_field(M, P, fn))
            brute = bd.brute_force_connection(w, M, P, direction, chart.general_field(fn))
            r = np.max(np.abs((ref - brute).as_array()))
            worst.update(r, kind="general", weights=w, point=p, fiber=u,
                         F=direction.horizontal, G=direction.vertical)
    except AdmissibilityError as exc:
        return _inadmissible(spec, tol, exc)
    return worst.report(spec, tol)


def sasaki_table(nabla_xy, r_xyu, r_uyx, r_uxy, kind_direction, kind_field):
    """Levi-Civita connection of the Sasaki metric on lifts, written out directly."""
    zero = np.zeros_like(r_xyu)
    table = {
        ("h", "h"): (nabla_xy, -0.5 * r_xyu),
        ("h", "v"): (0.5 * r_uyx, nabla_xy),
        ("v", "h"): (0.5 * r_uxy, zero),
        ("v", "v"): (zero, zero),
    }
    return table[(kind_direction, kind_field)]


def check_sasaki_reduction(spec):
    """At weights (1, 0, 1) the connection must equal the Sasaki table."""
    tol = TOL_ANALYTIC if spec.tolerance is None else spec.tolerance
    rng = np.random.default_rng(spec.seed)
    worst = _Worst()
    w = bd.SASAKI
    for _ in range(spec.sample_count):
        if spec.manifold == "so3":
            R = so3.exp_so3(rng.normal(size=3))
            omega, X, Y = rng.normal(size=(3, 3))
            nabla = 0.5 * so3.cross(X, Y)
            curv = so3.so3_curvature
            for kd, kf in product("hv", repeat=2):
                zeta, eta = (X, np.zeros(3)) if kd == "h" else (np.zeros(3), X)
                alpha, beta = (Y, np.zeros(3)) if kf == "h" else (np.zeros(3), Y)
                H, V = so3.tso3_connection_left_invariant(w, R, omega, zeta, eta, alpha, beta)
                eh, ev = sasaki_table(nabla, curv(X, Y, omega), curv(omega, Y, X),
                                        curv(omega, X, Y), kd, kf)
                r = max(np.max(np.abs(so3.to_body(R, H) - eh)), np.max(np.abs(so3.to_body(R, V) - ev)))
                worst.update(r, lifts=kd + kf, omega=omega, X=X, Y=Y)
            continue
        M = make_manifold(spec.manifold)
        n = M.dimension
        p = M.sample_point(rng)
        u = rng.normal(size=n)
        P = bd.BundlePoint(p, u)
        X, Y = random_polynomial_field(rng, n), random_polynomial_field(rng, n)
        Xp, Yp = X(p), Y(p)
        Rt = riemann_tensor(M, p)
        nabla = covariant_derivative(M, Xp, Y, p)
        for kd, kf in product("hv", repeat=2):
            got = bd.lc_connection_lifts(w, M, P, X, Y, kd, kf)
            eh, ev = sasaki_table(nabla, apply_riemann(Rt, Xp, Yp, u), apply_riemann(Rt, u, Yp, Xp),
                                    apply_riemann(Rt, u, Xp, Yp), kd, kf)
            r = max(np.max(np.abs(got.horizontal - eh)), np.max(np.abs(got.vertical - ev)))
            worst.update(r, lifts=kd + kf, point=p, fiber=u, X=Xp, Y=Yp)
    details = {}
    if spec.weights is not None:
        details["note"] = "weights fixed to (1, 0, 1) for this check"
    return worst.report(spec, tol, **details)


def check_so3_closed_form(spec, sign=-1.0):
    """Closed-form TSO(3) connection against the generic formulas on SO(3)."""
    tol = 1e-10 if spec.tolerance is None else spec.tolerance
    rng = np.random.default_rng(spec.seed)
    worst = _Worst()
    try:
        weights = _weight_stream(spec, rng)
        for _ in range(spec.sample_count):
            w = next(weights)
            R = so3.exp_so3(rng.normal(size=3))
            vecs = rng.normal(size=(5, 3))
            H1, V1 = so3.tso3_connection_left_invariant(w, R, *vecs)
            H2, V2 = so3.tso3_connection_generic(w, R, *vecs, sign=sign)
            r = max(np.max(np.abs(H1 - H2)), np.max(np.abs(V1 - V2)))
            worst.update(r, weights=w, R=R, omega=vecs[0], zeta=vecs[1], eta=vecs[2],
                         alpha=vecs[3], beta=vecs[4])
    except AdmissibilityError as exc:
        return _inadmissible(spec, tol, exc)
    return worst.report(spec, tol)


CHECKS = {
    "positive_definite": check_positive_definite,
    "koszul_items": check_koszul_items,
    "torsion_compatibility": check_torsion_and_compatibility,
    "christoffel_oracle": check_christoffel_oracle,
    "sasaki_reduction": check_sasaki_reduction,
    "so3_closed_form": check_so3_closed_form,
}


def run_check(spec):
    return CHECKS[spec.check_id](spec)


def default_suite(seed=0, weights=None, tolerance=None, manifold=None, checks=None, sample_count=None):
    """Every check on every manifold it applies to.

    ``manifold`` and ``checks`` restrict the suite; ``weights``,
    ``tolerance`` and ``sample_count`` override the per-check defaults. The
    tolerance override does not apply to ``positive_definite``.
    """
    plan = [
        ("positive_definite", "euclidean_2", 20),
        ("positive_definite", "sphere2_stereographic", 20),
        ("positive_definite", "so3", 20),
        ("koszul_items", "euclidean_2", 10),
        ("koszul_items", "sphere2_stereographic", 20),
        ("torsion_compatibility", "euclidean_2", 10),
        ("torsion_compatibility", "sphere2_stereographic", 10),
        ("torsion_compatibility", "so3", 20),
        ("christoffel_oracle", "euclidean_2", 5),
        ("christoffel_oracle", "sphere2_stereographic", 10),
        ("sasaki_reduction", "euclidean_2", 10),
        ("sasaki_reduction", "sphere2_stereographic", 10),
        ("sasaki_reduction", "so3", 10),
        ("so3_closed_form", "so3", 50),
    ]
    specs = []
    for i, (cid, man, count) in enumerate(plan):
        if manifold is not None and not _same_family(man, manifold):
            continue
        if checks is not None and cid not in checks:
            continue
        # the positivity residual is a margin, so its threshold stays at zero
        tol = None if cid == "positive_definite" else tolerance
        if sample_count is not None:
            count = sample_count
        specs.append(CheckSpec(cid, manifold or man, weights, tol, count, seed + i))
    return specs


def _same_family(a, b):
    fam = lambda m: "euclidean" if m.startswith("euclidean") else m.replace("_fd", "")  # noqa: E731
    return fam(a) == fam(b)


def run_suite(specs, jobs=1):
    """Run checks, optionally in worker processes; order of reports follows ``specs``."""
    specs = list(specs)
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_check, specs))
    return [run_check(s) for s in specs]


def weight_grid(m1_values, m2_values, m3_values):
    """Split a weight grid into admissible triples and rejected cells."""
    admissible, rejected = [], []
    for m1, m2, m3 in product(m1_values, m2_values, m3_values):
        try:
            admissible.append(bd.validate_weights(m1, m2, m3))
        except AdmissibilityError as exc:
            rejected.append({"weights": [m1, m2, m3], "condition": exc.condition})
    return admissible, rejected


def summarize(reports):
    finite = [r.max_residual for r in reports if math.isfinite(r.max_residual)]
    return {
        "pass": all(r.passed for r in reports) and bool(reports),
        "max_residual": max(finite) if finite else None,
        "checks_run": len(reports),
        "checks_failed": sum(not r.passed for r in reports),
    }


__all__ = [
    "CheckSpec",
    "CheckReport",
    "CHECKS",
    "check_positive_definite",
    "check_koszul_items",
    "check_torsion_and_compatibility",
    "check_christoffel_oracle",
    "check_sasaki_reduction",
    "check_so3_closed_form",
    "default_suite",
    "run_check",
    "run_suite",
    "weight_grid",
    "summarize",
    "make_manifold",
    "random_weights",
    "random_polynomial_field",
    "random_general_field",
    "sasaki_table",
    "so3_compatibility_residual",
    "so3_lift_bracket",
]

