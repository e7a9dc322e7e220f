"""Grid certification of the analytic inequalities behind the push-off.

Every function here evaluates closed-form smooth profiles on numpy grids
and reports the worst sample with its location.  Nothing is proved: a
report says the inequality held at every sample, by how much, and how big
the sampled Lipschitz constant was.

Smooth building blocks are made from the flat function exp(-1/x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Fn = Callable[[np.ndarray], np.ndarray]

DEFAULT_TOL = 1e-6
# A grid step may be at most this fraction of the smallest gap between the
# profile constants 0 < eps1 < eps2 < eps3 < c.
GRID_FRACTION = 0.05


class GridTooCoarse(ValueError):
    pass


class ProfileError(ValueError):
    pass


# smooth primitives ----------------------------------------------------------


# Below this argument exp(-1/x) underflows double precision anyway.
_FLAT_CUTOFF = 1.0 / 700.0


def flat(x):
    """exp(-1/x) for x > 0 and 0 otherwise; all derivatives vanish at 0."""
    x = np.asarray(x, dtype=float)
    live = x > _FLAT_CUTOFF
    safe = np.where(live, x, 1.0)
    return np.where(live, np.exp(-1.0 / safe), 0.0)


def dflat(x):
    x = np.asarray(x, dtype=float)
    live = x > _FLAT_CUTOFF
    safe = np.where(live, x, 1.0)
    return np.where(live, np.exp(-1.0 / safe) / safe**2, 0.0)


def step(x):
    """Smooth step: 0 for x <= 0, 1 for x >= 1, flat at both ends.

    >>> float(step(0.5))
    0.5
    """
    a, b = flat(x), flat(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def dstep(x):
    x = np.asarray(x, dtype=float)
    a, b = flat(x), flat(1.0 - x)
    da, db = dflat(x), dflat(1.0 - x)
    return (da * b + a * db) / (a + b) ** 2


# Lutz pairs -----------------------------------------------------------------


@dataclass(frozen=True)
class LutzPair:
    h1: Fn
    dh1: Fn
    h2: Fn
    dh2: Fn
    r_max: float = 2.0
    name: str = "lutz"

    def wronskian(self, r):
        return self.h1(r) * self.dh2(r) - self.dh1(r) * self.h2(r)


def default_lutz_pair(name: str = "default") -> LutzPair:
    """h1 = 1 - exp(-1/r^2) (flat at 0), h2 = r^2 / (1 + r^2).

    >>> p = default_lutz_pair()
    >>> float(p.h1(np.array(0.0)))
    1.0
    """
    def h1(r):
        return 1.0 - flat(np.asarray(r, dtype=float) ** 2)

    def dh1(r):
        r = np.asarray(r, dtype=float)
        return -2.0 * r * dflat(r**2)

    def h2(r):
        r = np.asarray(r, dtype=float)
        return r**2 / (1.0 + r**2)

    def dh2(r):
        r = np.asarray(r, dtype=float)
        return 2.0 * r / (1.0 + r**2) ** 2

    return LutzPair(h1, dh1, h2, dh2, name=name)


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    detail: str = ""


def validate_lutz_pair(pair: LutzPair, points: int = 2000, tol: float = DEFAULT_TOL) -> list[CheckResult]:
    """Sampled check of the Lutz-pair conditions on (0, r_max]."""
    r = np.linspace(pair.r_max / points, pair.r_max, points)
    out = []
    h10 = float(pair.h1(np.array(0.0)))
    out.append(CheckResult("h1(0) = 1", abs(h10 - 1.0) <= tol, h10))
    small = r[r <= 0.1]
    ratio = pair.h2(small) / small**2
    out.append(CheckResult("h2/r^2 bounded and positive near 0",
                           bool(ratio.min() > tol and ratio.max() < 1e6), float(ratio.min()),
                           f"range [{ratio.min():.6g}, {ratio.max():.6g}]"))
    out.append(CheckResult("h1 > 0", bool(pair.h1(r).min() > 0), float(pair.h1(r).min())))
    # Flat functions underflow near 0; strict signs are checked where the
    # derivative is representable and weak signs everywhere.
    d1 = pair.dh1(r)
    live = r >= 0.05
    out.append(CheckResult("h1' <= 0 everywhere, < 0 for r >= 0.05",
                           bool(d1.max() <= 0 and d1[live].max() < 0), float(d1[live].max())))
    d2 = pair.dh2(r)
    out.append(CheckResult("h2' >= 0", bool(d2.min() >= 0), float(d2.min())))
    # Flatness: |h1'(r)| should beat every power of r near 0; test r^8.
    tiny = r[r <= 0.2]
    decay = np.abs(pair.dh1(tiny)) / tiny**8
    out.append(CheckResult("h1 flat at 0 (|h1'| <= r^8 near 0)", bool(decay.max() <= 1.0),
                           float(decay.max())))
    w = pair.wronskian(r)
    out.append(CheckResult("h1 h2' - h1' h2 > 0", bool(w.min() > 0), float(w.min())))
    return out


# push-off profile -------------------------------------------------------------


@dataclass(frozen=True)
class PushOffProfile:
    """Profile functions f, h of the push-off and the cutoffs u, u~.

    f vanishes on [0, eps1], equals the identity from eps3 on; h rises
    strictly from 0 and is constant c from eps2 on.  u is a bump in r
    peaking at r = c, and u~ depends on (ambient r', r) with its own
    width eps_u.
    """

    eps1: float = 0.2
    eps2: float = 0.4
    eps3: float = 0.6
    c: float = 0.8
    r_max: float = 1.2
    eps_u: float = 0.1
    f: Fn | None = None
    df: Fn | None = None
    h: Fn | None = None
    dh: Fn | None = None

    def __post_init__(self):
        if not 0 < self.eps1 < self.eps2 < self.eps3 < self.c:
            raise ProfileError(
                f"need 0 < eps1 < eps2 < eps3 < c, got {self.eps1}, {self.eps2}, {self.eps3}, {self.c}")
        if not 0 < self.eps_u < min(self.eps1, self.c - self.eps3):
            raise ProfileError("eps_u must be positive and smaller than eps1 and c - eps3")
        if self.r_max < self.c + self.eps_u:
            raise ProfileError("r_max must cover the support of u")
        for a, b in (("f", "df"), ("h", "dh")):
            if (getattr(self, a) is None) != (getattr(self, b) is None):
                raise ProfileError(f"{a} and {b} must be given together")

    @property
    def min_spacing(self) -> float:
        return min(self.eps1, self.eps2 - self.eps1, self.eps3 - self.eps2, self.c - self.eps3, self.eps_u)

    def f_(self, x):
        if self.f is not None:
            return self.f(x)
        x = np.asarray(x, dtype=float)
        return step((x - self.eps1) / (self.eps3 - self.eps1)) * x

    def df_(self, x):
        if self.df is not None:
            return self.df(x)
        x = np.asarray(x, dtype=float)
        w = self.eps3 - self.eps1
        z = (x - self.eps1) / w
        return dstep(z) * x / w + step(z)

    def _q(self, x):
        x = np.asarray(x, dtype=float)
        inside = x < 1
        safe = np.where(inside, x, 0.0)
        return np.where(inside, np.exp(-safe / (1.0 - safe)), 0.0)

    def h_(self, x):
        if self.h is not None:
            return self.h(x)
        x = np.asarray(x, dtype=float)
        return self.c * (1.0 - self._q(x / self.eps2))

    def dh_(self, x):
        if self.dh is not None:
            return self.dh(x)
        z = np.asarray(x, dtype=float) / self.eps2
        inside = z < 1
        safe = np.where(inside, z, 0.0)
        return np.where(inside, self.c * self._q(safe) / (self.eps2 * (1.0 - safe) ** 2), 0.0)

    def u(self, r):
        r = np.asarray(r, dtype=float)
        w = self.eps_u
        return np.where(r <= self.c, step((r - (self.c - w)) / w), step((self.c + w - r) / w))

    def u_tilde(self, rp, r):
        """Cutoff on the ambient (r', r) plane."""
        rp = np.asarray(rp, dtype=float)
        r = np.asarray(r, dtype=float)
        e = self.eps_u
        alpha = step((r - (self.c - e)) / e)
        beta = step((r - self.c) / e)
        return beta + (1.0 - beta) * alpha * step(rp / e)


def default_profile() -> PushOffProfile:
    return PushOffProfile()


def validate_profile(prof: PushOffProfile, points: int = 4000, tol: float = DEFAULT_TOL) -> list[CheckResult]:
    x = np.linspace(0.0, prof.r_max, points + 1)
    out = []
    f, df, h, dh = prof.f_(x), prof.df_(x), prof.h_(x), prof.dh_(x)
    lo = x <= prof.eps1
    out.append(CheckResult("f = 0 on [0, eps1]", bool(np.abs(f[lo]).max() <= tol), float(np.abs(f[lo]).max())))
    hi = x >= prof.eps3
    dev = float(np.abs(f[hi] - x[hi]).max())
    out.append(CheckResult("f = id from eps3", dev <= tol, dev))
    out.append(CheckResult("f monotone", bool(df.min() >= -tol), float(df.min())))
    out.append(CheckResult("h(0) = 0", abs(float(h[0])) <= tol, float(h[0])))
    rise = (x > 0) & (x < 0.98 * prof.eps2)
    out.append(CheckResult("h' >= 0 everywhere, > 0 on (0, 0.98 eps2)",
                           bool(dh.min() >= 0 and dh[rise].min() > 0), float(dh[rise].min())))
    out.append(CheckResult("h'(0) > 0", float(dh[0]) > 0, float(dh[0])))
    top = x >= prof.eps2
    dev = float(np.abs(h[top] - prof.c).max())
    out.append(CheckResult("h = c from eps2", dev <= tol, dev))
    u = prof.u(x)
    near0 = x <= prof.c - prof.eps_u
    far = x >= prof.c + prof.eps_u
    out.append(CheckResult("u = 0 near 0 and beyond c + eps", bool(u[near0].max() <= tol and u[far].max() <= tol),
                           float(max(u[near0].max(), u[far].max()))))
    uc = float(prof.u(np.array(prof.c)))
    out.append(CheckResult("u(c) = 1", abs(uc - 1) <= tol, uc))
    # u~ bullet conditions on a coarse 2-d grid
    rp = np.linspace(0.0, prof.r_max, 121)
    r = np.linspace(0.0, prof.r_max, 121)
    RP, R = np.meshgrid(rp, r, indexing="ij")
    ut = prof.u_tilde(RP, R)
    zero_zone = (R <= prof.c - prof.eps_u) | ((RP <= 0) & (R <= prof.c))
    one_zone = ((RP >= prof.eps_u) & np.isclose(R, prof.c)) | (R >= prof.c + prof.eps_u)
    ok0 = float(np.abs(ut[zero_zone]).max())
    one_vals = np.concatenate([ut[one_zone], prof.u_tilde(rp[rp >= prof.eps_u], prof.c)])
    ok1 = float(np.abs(one_vals - 1).max())
    mono = min(float(np.diff(ut, axis=0).min()), float(np.diff(ut, axis=1).min()))
    out.append(CheckResult("u~ = 0 near B and on {r' <= eps, r <= c - eps}", ok0 <= tol, ok0))
    out.append(CheckResult("u~ = 1 on {r' >= eps, r = c} and r >= c + eps", ok1 <= tol, ok1))
    out.append(CheckResult("u~ monotone in r' and r", mono >= -tol, mono))
    return out


# reports ----------------------------------------------------------------------


@dataclass
class PositivityReport:
    name: str
    grid: dict
    minimum: float
    argmin: dict
    margin: float
    tol: float
    passed: bool
    lipschitz: float | None = None
    term_minima: dict = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.passed and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "grid": self.grid,
            "min": self.minimum,
            "argmin": self.argmin,
            "margin": self.margin,
            "tol": self.tol,
            "lipschitz": self.lipschitz,
            "terms": self.term_minima,
            "checks": [{"name": c.name, "pass": c.passed, "value": c.value, "detail": c.detail}
                       for c in self.checks],
            "certificates": self.certificates,
            "pass": self.all_passed,
        }

    def to_text(self) -> str:
        lines = [f"report {self.name}: {'PASS' if self.all_passed else 'FAIL'}",
                 "  grid: " + " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in self.grid.items()),
                 f"  min: {self.minimum:.9g} at " + " ".join(f"{k}={v:.6g}" for k, v in self.argmin.items()),
                 f"  margin: {self.margin:.9g} (tol {self.tol:g})"]
        if self.lipschitz is not None:
            lines.append(f"  sampled lipschitz: {self.lipschitz:.6g}")
        for k, v in self.term_minima.items():
            lines.append(f"  {k}: {v:.9g}")
        for c in self.checks:
            lines.append(f"  check {c.name}: {'ok' if c.passed else 'FAIL'} ({c.value:.6g})"
                         + (f" {c.detail}" if c.detail else ""))
        for cert in self.certificates:
            lines.append("  certificate " + " ".join(f"{k}={_fmt(v)}" for k, v in cert.items()))
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, dict):
        return "{" + ",".join(f"{k}:{_fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


def _check_1d_grid(prof: PushOffProfile, points: int) -> float:
    h = prof.r_max / points
    if h > GRID_FRACTION * prof.min_spacing:
        need = math.ceil(prof.r_max / (GRID_FRACTION * prof.min_spacing))
        raise GridTooCoarse(f"grid step {h:.3g} exceeds {GRID_FRACTION} x min spacing "
                            f"{prof.min_spacing:.3g}; use at least {need} points")
    return h


# contact condition on the push-off ------------------------------------------------


def pushoff_terms(ambient: LutzPair, binding: LutzPair, prof: PushOffProfile, rp):
    """lambda, mu, their derivatives, W = lambda mu' - lambda' mu and the A, B, C split."""
    rp = np.asarray(rp, dtype=float)
    h, dh, f, df = prof.h_(rp), prof.dh_(rp), prof.f_(rp), prof.df_(rp)
    H1, dH1 = ambient.h1(h), ambient.dh1(h) * dh
    H2, dH2 = ambient.h2(h), ambient.dh2(h) * dh
    G1, dG1 = binding.h1(f), binding.dh1(f) * df
    G2, dG2 = binding.h2(f), binding.dh2(f) * df
    lam = H1 * G1
    mu = H1 * G2 + H2
    dlam = dH1 * G1 + H1 * dG1
    dmu = dH1 * G2 + H1 * dG2 + dH2
    W = lam * dmu - dlam * mu
    A = H1**2 * (G1 * dG2 - dG1 * G2)
    B = H1 * (dH2 * G1 - dG1 * H2)
    C = -dH1 * G1 * H2
    return {"lambda": lam, "mu": mu, "dlambda": dlam, "dmu": dmu, "W": W, "A": A, "B": B, "C": C}


def verify_pushoff_contact(ambient: LutzPair | None = None, binding: LutzPair | None = None,
                           prof: PushOffProfile | None = None, n: int = 2, grid: int = 10_000,
                           tol: float = DEFAULT_TOL) -> PositivityReport:
    """Certify lambda mu' - lambda' mu > 0 on (0, r_max].

    W vanishes at r' = 0 to first order (h2 vanishes like r^2), and the
    volume form carries a 1/r' factor, so the grid starts one step above 0
    and the small-r' behaviour is checked against the reduction
    h' (h1 h2' - h1' h2) o h, valid wherever f = 0.
    """
    ambient = ambient or default_lutz_pair("ambient")
    binding = binding or default_lutz_pair("binding")
    prof = prof or default_profile()
    if n < 1:
        raise ValueError("dimension index n must be >= 1")
    step_ = _check_1d_grid(prof, grid)
    rp = np.linspace(step_, prof.r_max, grid)
    t = pushoff_terms(ambient, binding, prof, rp)
    W = t["W"]
    i = int(np.argmin(W))
    lip = float(np.abs(np.diff(W)).max() / step_)

    checks = []
    A, B, C = t["A"], t["B"], t["C"]
    nonneg = float(min(A.min(), B.min(), C.min()))
    checks.append(CheckResult("A, B, C >= -tol everywhere", nonneg >= -tol, nonneg))
    best = np.maximum(np.maximum(A, B), C)
    j = int(np.argmin(best))
    checks.append(CheckResult("max(A, B, C) > tol at every point", float(best[j]) > tol, float(best[j]),
                              f"weakest at r'={rp[j]:.6g}"))
    split = float(np.abs(A + B + C - W).max())
    checks.append(CheckResult("W = A + B + C", split <= tol * max(1.0, float(np.abs(W).max())), split))

    small = rp <= prof.eps1
    hs = prof.h_(rp[small])
    reduction = prof.dh_(rp[small]) * ambient.wronskian(hs)
    dev = float(np.abs(W[small] - reduction).max())
    checks.append(CheckResult("W = h' (h1 h2' - h1' h2) o h where f = 0", dev <= tol, dev))
    checks.append(CheckResult("reduction positive near r' = 0", bool(reduction.min() > 0),
                              float(reduction.min())))
    # W / r' has a positive limit: (h'(0))^2 * lim (h1 h2' - h1' h2)(s)/s = 2 h'(0)^2 for h2 ~ s^2.
    ratio = float(W[0] / rp[0])
    limit = 2.0 * float(prof.dh_(np.array(0.0))) ** 2 * float(ambient.dh2(np.array(1e-6)) / 2e-6)
    checks.append(CheckResult("W/r' near 0 matches its limit 2 h'(0)^2 (h2''(0)/2)",
                              abs(ratio - limit) <= 0.01 * limit, ratio, f"limit {limit:.6g}"))

    hc1 = float(ambient.h1(np.array(prof.c)))
    hc2 = float(ambient.h2(np.array(prof.c)))
    checks.append(CheckResult(f"h1(c)^{n} > 0", hc1**n > 0, hc1**n))
    checks.append(CheckResult(f"h1(c)^{n - 1} h2(c) > 0", hc1 ** (n - 1) * hc2 > 0, hc1 ** (n - 1) * hc2))

    return PositivityReport(
        name="pushoff-contact",
        grid={"points": grid, "r'_min": float(rp[0]), "r'_max": prof.r_max, "step": step_, "n": n},
        minimum=float(W[i]),
        argmin={"r'": float(rp[i])},
        margin=float(W[i]) - tol,
        tol=tol,
        passed=bool(W[i] > tol),
        lipschitz=lip,
        term_minima={"min A": float(A.min()), "min B": float(B.min()), "min C": float(C.min()),
                     "min lambda": float(t["lambda"].min())},
        checks=checks,
    )


# framing homotopy on the intermediate push-off -------------------------------------------


def framing_vector(theta, t, h, r, rp):
    """F_h = (1-h) F0 + h F1 in the basis (d_r, d_r', d_theta, d_theta').

    The last entry is h (1 - t + t sin^2) sin / r', as obtained by expanding
    F1 in polar coordinates.
    """
    s, c = np.sin(theta), np.cos(theta)
    k = 1.0 - t + t * s**2
    return (
        (1.0 - h + h * t) * c,
        -k * h * c,
        -(1.0 - h) * s / r,
        k * h * s / rp,
    )


def tangency_distance(v, t):
    """Euclidean distance of v to the tangent space of the intermediate push-off.

    t > 1/2: span of (0,1,0,0), (0,0,1,1); t < 1/2: span of (1,1,0,0), (0,0,1,1).
    At t = 1/2 the smaller of the two is used.
    """
    v1, v2, v3, v4 = v
    d_hi = np.sqrt(v1**2 + (v3 - v4) ** 2 / 2.0)
    d_lo = np.sqrt((v1 - v2) ** 2 / 2.0 + (v3 - v4) ** 2 / 2.0)
    return np.where(t > 0.5, d_hi, np.where(t < 0.5, d_lo, np.minimum(d_hi, d_lo)))


def verify_framing_homotopy(prof: PushOffProfile | None = None, n_theta: int = 16, n_t: int = 11,
                            n_h: int = 11, n_r: int = 8, n_rp: int = 8,
                            tol: float = DEFAULT_TOL) -> PositivityReport:
    """Certify that F_h is never tangent to the intermediate push-off.

    Grid: theta in [0, 2 pi) (a multiple of 4 points, so the quarter angles
    are sampled), t and h in [0, 1], r and r' in (0, r_max].
    """
    prof = prof or default_profile()
    if n_theta % 4 or n_theta < 8:
        raise GridTooCoarse("n_theta must be a multiple of 4 and at least 8")
    if min(n_t, n_h) < 3 or min(n_r, n_rp) < 2:
        raise GridTooCoarse("t and h need >= 3 samples (ends and midpoint), r and r' >= 2")
    if n_t % 2 == 0:
        raise GridTooCoarse("n_t must be odd so that t = 1/2 is sampled")
    theta = np.arange(n_theta) * (2 * np.pi / n_theta)
    ts = np.linspace(0.0, 1.0, n_t)
    hs = np.linspace(0.0, 1.0, n_h)
    rs = np.linspace(prof.r_max / n_r, prof.r_max, n_r)
    rps = np.linspace(prof.r_max / n_rp, prof.r_max, n_rp)
    TH, T, H, R, RP = np.meshgrid(theta, ts, hs, rs, rps, indexing="ij")
    v = framing_vector(TH, T, H, R, RP)
    d = tangency_distance(v, T)
    idx = np.unravel_index(int(np.argmin(d)), d.shape)
    dmin = float(d[idx])
    lip_est = float(max(np.abs(np.diff(d, axis=a)).max() for a in range(5) if d.shape[a] > 1))

    certificates = []
    checks = []
    # theta = pi/2, t >= 1/2: F_h = (0, 0, -(1-h)/r, h/r'); obstruction (1-h)/r + h/r' > 0.
    sel_t = ts >= 0.5
    Hq, Rq, RPq = np.meshgrid(hs, rs, rps, indexing="ij")
    obstruction = (1.0 - Hq) / Rq + Hq / RPq
    k = np.unravel_index(int(np.argmin(obstruction)), obstruction.shape)
    vq = framing_vector(np.pi / 2, ts[sel_t][:, None, None, None], Hq[None], Rq[None], RPq[None])
    expected = (0.0, 0.0, -(1.0 - Hq) / Rq, Hq / RPq)
    red = max(float(np.abs(np.broadcast_to(a, vq[0].shape) - b).max()) for a, b in zip(vq, expected))
    certificates.append({
        "case": "theta=pi/2,t>=1/2",
        "claim": "(1/r)(1-h)+(1/r')h>0",
        "min": float(obstruction[k]),
        "at": {"h": float(hs[k[0]]), "r": float(rs[k[1]]), "r'": float(rps[k[2]])},
        "reduction_error": red,
    })
    checks.append(CheckResult("theta=pi/2 obstruction positive", float(obstruction[k]) > tol and red <= tol,
                              float(obstruction[k])))
    # sin(theta) = 0, t <= 1/2: tangency would need v1 = v2, i.e. (1-h+ht) + h(1-t) = 0; that sum is 1.
    sel_lo = ts <= 0.5
    worst = None
    for th in (0.0, np.pi):
        Tq, Hq2, Rq2, RPq2 = np.meshgrid(ts[sel_lo], hs, rs, rps, indexing="ij")
        v1, v2, v3, v4 = framing_vector(th, Tq, Hq2, Rq2, RPq2)
        lhs = (1.0 - Hq2 + Hq2 * Tq) + Hq2 * (1.0 - Tq)
        gap = np.abs(v1 - v2)
        j = np.unravel_index(int(np.argmin(gap)), gap.shape)
        entry = {
            "theta": th,
            "min|v1-v2|": float(gap[j]),
            "max|(1-h+ht)+h(1-t)-1|": float(np.abs(lhs - 1.0).max()),
            "max|v3|+|v4|": float((np.abs(v3) + np.abs(v4)).max()),
            "at": {"t": float(Tq[j]), "h": float(Hq2[j]), "r": float(Rq2[j]), "r'": float(RPq2[j])},
        }
        if worst is None or entry["min|v1-v2|"] < worst["min|v1-v2|"]:
            worst = entry
        ok = entry["min|v1-v2|"] > tol and entry["max|(1-h+ht)+h(1-t)-1|"] <= tol \
            and entry["max|v3|+|v4|"] <= tol
        checks.append(CheckResult(f"sin(theta)=0 contradiction at theta={th:.6g}", ok, entry["min|v1-v2|"]))
    certificates.append({"case": "sin(theta)=0,t<=1/2", "claim": "tangency forces 1=0", **worst})
    # h = 0: F0 = cos d_r - (1/r) sin d_theta is never tangent.
    d0 = d[:, :, 0, :, :]
    j = np.unravel_index(int(np.argmin(d0)), d0.shape)
    certificates.append({"case": "h=0", "claim": "F0 never tangent", "min": float(d0[j]),
                         "at": {"theta": float(theta[j[0]]), "t": float(ts[j[1]]),
                                "r": float(rs[j[2]]), "r'": float(rps[j[3]])}})
    checks.append(CheckResult("h=0 distance positive", float(d0[j]) > tol, float(d0[j])))

    return PositivityReport(
        name="framing-homotopy",
        grid={"theta": n_theta, "t": n_t, "h": n_h, "r": n_r, "r'": n_rp, "samples": int(d.size)},
        minimum=dmin,
        argmin={"theta": float(theta[idx[0]]), "t": float(ts[idx[1]]), "h": float(hs[idx[2]]),
                "r": float(rs[idx[3]]), "r'": float(rps[idx[4]])},
        margin=dmin - tol,
        tol=tol,
        passed=dmin > tol,
        lipschitz=lip_est,
        checks=checks,
        certificates=certificates,
    )


# F1 against the push-off itself ----------------------------------------------------------------


def f1_field(prof: PushOffProfile, rp, theta):
    """F1 at g(r', theta) in Cartesian (x', y', x, y)."""
    ut = prof.u_tilde(prof.f_(rp), prof.h_(rp))
    s, c = np.sin(theta), np.cos(theta)
    return np.stack([-(1.0 - ut + ut * s**2), np.zeros_like(ut * c), ut * c * c, ut * c * s], axis=-1)


def pushoff_tangents(prof: PushOffProfile, rp, theta):
    """Unit-scale tangent vectors of B+ along r' and theta (B' directions omitted)."""
    f, df, h, dh = prof.f_(rp), prof.df_(rp), prof.h_(rp), prof.dh_(rp)
    s, c = np.sin(theta), np.cos(theta)
    t1 = np.stack([df * c, df * s, dh * c, dh * s], axis=-1)
    # d/dtheta scaled by 1/max(f, h) (at r' = 0 this is the limiting direction)
    scale = np.maximum(np.maximum(f, h), 1e-300)
    ff = np.where(f + h > 0, f / scale, 0.0)
    hh = np.where(f + h > 0, h / scale, 1.0)
    t2 = np.stack([-ff * s, ff * c, -hh * s, hh * c], axis=-1)
    return t1, t2


def verify_f1_nontangent(prof: PushOffProfile | None = None, n_rp: int = 600, n_theta: int = 360,
                         tol: float = DEFAULT_TOL) -> PositivityReport:
    """Certify that F1 stays a positive distance from T B+.

    The reported value is the distance from F1/|F1| to the tangent plane.
    """
    prof = prof or default_profile()
    _check_1d_grid(prof, n_rp)
    if n_theta % 4 or n_theta < 8:
        raise GridTooCoarse("n_theta must be a multiple of 4 and at least 8")
    rp = np.linspace(0.0, prof.r_max, n_rp + 1)
    theta = np.arange(n_theta) * (2 * np.pi / n_theta)
    RP, TH = np.meshgrid(rp, theta, indexing="ij")
    F = f1_field(prof, RP, TH)
    t1, t2 = pushoff_tangents(prof, RP, TH)
    # Orthonormalise (t1, t2) pointwise, then measure the residual of F.
    e1 = t1 / np.linalg.norm(t1, axis=-1, keepdims=True)
    t2p = t2 - np.sum(t2 * e1, axis=-1, keepdims=True) * e1
    e2 = t2p / np.linalg.norm(t2p, axis=-1, keepdims=True)
    Fn = F / np.linalg.norm(F, axis=-1, keepdims=True)
    res = Fn - np.sum(Fn * e1, axis=-1, keepdims=True) * e1 - np.sum(Fn * e2, axis=-1, keepdims=True) * e2
    d = np.linalg.norm(res, axis=-1)
    idx = np.unravel_index(int(np.argmin(d)), d.shape)
    dmin = float(d[idx])
    checks = []
    at0 = d[0]
    checks.append(CheckResult("r'=0: F1 = -d_x' normal to the binding fibre", bool(np.abs(at0 - 1).max() <= tol),
                              float(at0.min())))
    far = rp >= prof.eps3
    checks.append(CheckResult("r' >= eps3 region", bool(d[far].min() > tol), float(d[far].min())))
    return PositivityReport(
        name="f1-nontangent",
        grid={"r'": n_rp + 1, "theta": n_theta, "samples": int(d.size)},
        minimum=dmin,
        argmin={"r'": float(rp[idx[0]]), "theta": float(theta[idx[1]])},
        margin=dmin - tol,
        tol=tol,
        passed=dmin > tol,
        lipschitz=float(max(np.abs(np.diff(d, axis=0)).max(), np.abs(np.diff(d, axis=1)).max())),
        checks=checks,
    )
