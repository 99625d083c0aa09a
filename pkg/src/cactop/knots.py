"""Framed long knots as maps R^d -> R^d with analytic Jacobians, and the
action of interval configurations on tuples of them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .intervals import Interval, OvElement


class KnotError(ValueError):
    pass


@dataclass(frozen=True)
class FramedKnot:
    """F with Jacobian; F is the identity wherever x_1 lies outside I.

    The long knot curve is t -> F(t, 0, ..., 0) and its frame DF(t, 0),
    whose first column is the tangent.
    """

    d: int
    F: Callable[[np.ndarray], np.ndarray]
    J: Callable[[np.ndarray], np.ndarray]
    name: str = "knot"
    trivial: bool = False  # the identity map; kept symbolic so it stays exact

    def __call__(self, x) -> np.ndarray:
        return self.F(np.asarray(x, dtype=float))

    def jac(self, x) -> np.ndarray:
        return self.J(np.asarray(x, dtype=float))

    def curve(self, t: float) -> np.ndarray:
        return self(_axis(t, self.d))

    def frame(self, t: float) -> np.ndarray:
        return self.jac(_axis(t, self.d))

    def tangent(self, t: float) -> np.ndarray:
        return self.frame(t)[:, 0]

    def compose(self, other: "FramedKnot") -> "FramedKnot":
        """self o other."""
        f, g = self, other
        if f.trivial:
            return g
        if g.trivial:
            return f
        return FramedKnot(self.d, lambda x: f.F(g.F(x)), lambda x: f.J(g.F(x)) @ g.J(x), f"({f.name}*{g.name})")


def _axis(t: float, d: int) -> np.ndarray:
    x = np.zeros(d)
    x[0] = t
    return x


def identity(d: int = 3) -> FramedKnot:
    return FramedKnot(d, lambda x: x.copy(), lambda x: np.eye(d), "id", trivial=True)


def _smoothstep(u):
    u = min(max(u, 0.0), 1.0)
    return u**3 * (10 - 15 * u + 6 * u * u), 30 * u * u * (1 - u) ** 2


def twist(d: int = 3, turns: float = 1.0) -> FramedKnot:
    """Unknotted curve whose frame turns ``turns`` full rotations in the
    (e2, e3) plane."""
    if d < 3:
        raise KnotError("twisting needs d >= 3")

    def theta(s):
        if not -1 < s < 1:
            return 0.0 if s <= -1 else 2 * math.pi * turns, 0.0
        g, dg = _smoothstep((s + 1) / 2)
        return 2 * math.pi * turns * g, math.pi * turns * dg

    def F(x):
        if not -1 < x[0] < 1:
            return x.copy()
        th, _ = theta(x[0])
        c, s = math.cos(th), math.sin(th)
        y = x.copy()
        y[1], y[2] = c * x[1] - s * x[2], s * x[1] + c * x[2]
        return y

    def J(x):
        if not -1 < x[0] < 1:
            return np.eye(d)
        th, dth = theta(x[0])
        c, s = math.cos(th), math.sin(th)
        A = np.eye(d)
        A[1:3, 1:3] = [[c, -s], [s, c]]
        A[1, 0] = dth * (-s * x[1] - c * x[2])
        A[2, 0] = dth * (c * x[1] - s * x[2])
        return A

    return FramedKnot(d, F, J, "twist")


def _bump(t):
    """(1 - t^2)^3 with first and second derivatives."""
    if not -1 < t < 1:
        return 0.0, 0.0, 0.0
    a = 1 - t * t
    return a**3, -6 * t * a * a, -6 * a * a + 24 * t * t * a


def _trefoil_curve(t):
    """Curve, velocity and acceleration.  The first coordinate stays in I."""
    b, db, ddb = _bump(t)
    s = math.pi * (t + 1)
    g = np.array([(math.sin(s) + 2 * math.sin(2 * s)) / 3, (math.cos(s) - 2 * math.cos(2 * s) + 1) / 4, -math.sin(3 * s)])
    dg = math.pi * np.array([(math.cos(s) + 4 * math.cos(2 * s)) / 3, (-math.sin(s) + 4 * math.sin(2 * s)) / 4, -3 * math.cos(3 * s)])
    ddg = math.pi**2 * np.array([(-math.sin(s) - 8 * math.sin(2 * s)) / 3, (-math.cos(s) + 8 * math.cos(2 * s)) / 4, 9 * math.sin(3 * s)])
    k = np.array([0.45, 1.2, 0.6])
    base = np.array([t, 0.0, 0.0])
    c = base + k * b * g
    dc = np.array([1.0, 0, 0]) + k * (db * g + b * dg)
    ddc = k * (ddb * g + 2 * db * dg + b * ddg)
    return c, dc, ddc


def _rot_e1_to(u, du):
    """R = I + K + K^2 / (1 + c) sending e1 to u, and its derivative."""
    d = u.shape[0]
    E = np.zeros(d)
    E[0] = 1
    K = np.outer(u, E) - np.outer(E, u)
    dK = np.outer(du, E) - np.outer(E, du)
    c = u[0]
    dc = du[0]
    if c <= -1 + 1e-9:
        raise KnotError("tangent reverses the long axis")
    K2 = K @ K
    R = np.eye(d) + K + K2 / (1 + c)
    dR = dK + (dK @ K + K @ dK) / (1 + c) - K2 * dc / (1 + c) ** 2
    return R, dR


TUBE_INNER = 0.05
TUBE_OUTER = 0.1


def _tube_cutoff(r):
    """1 on r <= TUBE_INNER, 0 on r >= TUBE_OUTER, C^2 in between."""
    if r <= TUBE_INNER:
        return 1.0, 0.0
    if r >= TUBE_OUTER:
        return 0.0, 0.0
    g, dg = _smoothstep((r - TUBE_INNER) / (TUBE_OUTER - TUBE_INNER))
    return 1.0 - g, -dg / (TUBE_OUTER - TUBE_INNER)


def trefoil(d: int = 3) -> FramedKnot:
    """A long trefoil-shaped curve, thickened along the rotation-minimal
    frame and blended back to the identity away from the core so that
    every slab {x_1 in J} with J in I is mapped into itself."""
    if d < 3:
        raise KnotError("the trefoil curve needs d >= 3")

    def data(s):
        c3, dc3, ddc3 = _trefoil_curve(s)
        c = np.zeros(d)
        dc = np.zeros(d)
        ddc = np.zeros(d)
        c[:3], dc[:3], ddc[:3] = c3, dc3, ddc3
        nv = np.linalg.norm(dc)
        u = dc / nv
        du = (ddc - u * (u @ ddc)) / nv
        R, dR = _rot_e1_to(u, du)
        return c, dc, R, dR

    def F(x):
        if not -1 < x[0] < 1:
            return x.copy()
        k, _ = _tube_cutoff(float(np.linalg.norm(x[1:])))
        if k == 0.0:
            return x.copy()
        c, _, R, _ = data(x[0])
        T = c + R[:, 1:] @ x[1:]
        return T if k == 1.0 else x + k * (T - x)

    def J(x):
        if not -1 < x[0] < 1:
            return np.eye(d)
        r = float(np.linalg.norm(x[1:]))
        k, dk = _tube_cutoff(r)
        if k == 0.0:
            return np.eye(d)
        c, dc, R, dR = data(x[0])
        DT = np.empty((d, d))
        DT[:, 0] = dc + dR[:, 1:] @ x[1:]
        DT[:, 1:] = R[:, 1:]
        if k == 1.0:
            return DT
        grad = np.zeros(d)
        grad[1:] = dk * x[1:] / r
        T = c + R[:, 1:] @ x[1:]
        return np.eye(d) + k * (DT - np.eye(d)) + np.outer(T - x, grad)

    return FramedKnot(d, F, J, "trefoil")


def sampled_knot(samples, name: str = "sampled") -> FramedKnot:
    """Knot from samples [(t, point, frame), ...] covering I: the curve
    and frame are interpolated linearly in t, and off-axis points follow
    the interpolated frame's last d-1 columns.  Outside I it is the
    identity."""
    rows = sorted(samples, key=lambda r: float(r[0]))
    ts = np.array([float(r[0]) for r in rows])
    P = np.array([np.asarray(r[1], float) for r in rows])
    Fr = np.array([np.asarray(r[2], float) for r in rows])
    if len(ts) < 2 or ts[0] > -1 or ts[-1] < 1:
        raise KnotError("samples must cover [-1, 1]")
    d = P.shape[1]
    if Fr.shape != (len(ts), d, d):
        raise KnotError("frames must be d x d")

    def at(s):
        k = int(np.clip(np.searchsorted(ts, s) - 1, 0, len(ts) - 2))
        w = (s - ts[k]) / (ts[k + 1] - ts[k])
        c = (1 - w) * P[k] + w * P[k + 1]
        B = (1 - w) * Fr[k] + w * Fr[k + 1]
        dc = (P[k + 1] - P[k]) / (ts[k + 1] - ts[k])
        dB = (Fr[k + 1] - Fr[k]) / (ts[k + 1] - ts[k])
        return c, B, dc, dB

    def F(x):
        if not -1 < x[0] < 1:
            return x.copy()
        c, B, _, _ = at(x[0])
        return c + B[:, 1:] @ x[1:]

    def J(x):
        if not -1 < x[0] < 1:
            return np.eye(d)
        _, B, _, dB = at(x[0])
        A = B.copy()
        A[:, 0] = B[:, 0] + dB[:, 1:] @ x[1:]
        return A

    return FramedKnot(d, F, J, name)


def load_knot_samples(path: str) -> FramedKnot:
    import json

    with open(path) as fh:
        data = json.load(fh)
    return sampled_knot(data, name=path)


KNOTS = {"identity": identity, "twist": twist, "trefoil": trefoil}


def get_knot(name: str, d: int = 3) -> FramedKnot:
    if name.endswith(".json"):
        return load_knot_samples(name)
    try:
        return KNOTS[name](d)
    except KeyError:
        raise KnotError(f"unknown knot {name!r}; choose from {sorted(KNOTS)}") from None


def check_knot(f: FramedKnot, samples: int = 400, tol: float = 1e-9) -> dict:
    """Sampled sanity checks: immersion, identity outside I, first
    coordinate kept in I, and no near self-intersections."""
    ts = np.linspace(-1, 1, samples)
    pts = np.array([f.curve(t) for t in ts])
    speeds = np.array([np.linalg.norm(f.tangent(t)) for t in ts])
    out = [np.abs(f.curve(t) - _axis(t, f.d)).max() for t in (-3.0, -1.5, -1.0, 1.0, 1.5, 3.0)]
    gap = math.inf
    step = ts[1] - ts[0]
    for i in range(samples):
        for j in range(i + 8, samples):
            dist = np.linalg.norm(pts[i] - pts[j])
            gap = min(gap, dist / min(1.0, (j - i) * step))
    return {
        "min_speed": float(speeds.min()),
        "outside_error": float(max(out)),
        "stays_in_slab": bool(np.all(np.abs(pts[:, 0]) <= 1 + tol)),
        "min_separation": float(gap),
    }


# ------------------------------------------------------------ the action


def rescale(L: Interval, f: FramedKnot) -> FramedKnot:
    """(L x id) o F o (L x id)^{-1}."""
    if f.trivial:
        return f
    lo, hi = float(L.lo), float(L.hi)
    r = (hi - lo) / 2
    m = (hi + lo) / 2
    d = f.d
    S = np.ones(d)
    S[0] = r

    def pre(x):
        y = x.copy()
        y[0] = (x[0] - m) / r
        return y

    def F(x):
        if not lo < x[0] < hi:
            return x.copy()
        y = f.F(pre(x))
        y[0] = m + r * y[0]
        return y

    def J(x):
        if not lo < x[0] < hi:
            return np.eye(d)
        return (S[:, None] * f.J(pre(x))) / S[None, :]

    return FramedKnot(d, F, J, f"{f.name}@[{L.lo},{L.hi}]")


def budney_act(e: OvElement, knots, sigma=None, d: int = 3) -> FramedKnot:
    """A(e; f_1..f_m): rescaled knots composed in height order, the
    lowest applied first.  ``sigma`` picks a linear extension of the
    height order (default: the smallest).  Arity 0 gives the identity."""
    knots = list(knots)
    if len(knots) != e.m:
        raise KnotError(f"expected {e.m} knots, got {len(knots)}")
    if e.m == 0:
        return identity(d)
    if sigma is None:
        sigma = e.sigma()
    elif tuple(sigma) not in set(e.linear_extensions()):
        raise KnotError("sigma is not a linear extension of the height order")
    d = knots[0].d
    if any(f.d != d for f in knots):
        raise KnotError("knots must share the dimension")
    result = identity(d)
    for lab in sigma:
        result = rescale(e.intervals[lab - 1], knots[lab - 1]).compose(result)
    return result


def knot_distance(f: FramedKnot, g: FramedKnot, samples: int = 64, radius: float = 0.05, seed: int = 0) -> float:
    """Max difference of values and Jacobians on the curve and on tube
    points of the given radius."""
    rng = np.random.default_rng(seed)
    d = f.d
    worst = 0.0
    ts = np.concatenate([np.linspace(-1.2, 1.2, samples), rng.uniform(-1, 1, samples)])
    for t in ts:
        x = _axis(t, d)
        x[1:] = rng.normal(size=d - 1) * radius * rng.uniform()
        for y in (_axis(t, d), x):
            worst = max(worst, float(np.abs(f(y) - g(y)).max()), float(np.abs(f.jac(y) - g.jac(y)).max()))
    return worst
