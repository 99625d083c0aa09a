"""Framed configurations: infinitesimal ones (the framed Kontsevich
operad) and spatial ones with distinguished boundary points, insertion,
cosimplicial structure maps, Gram-Schmidt, and the shrinking map H with
its t -> 1 limit.

Directions follow v_ij = (x_i - x_j) / |x_i - x_j| for i < j, so points
increasing along the long axis give v_ij = -e1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIT_TOL = 1e-12
SQRT2 = math.sqrt(2.0)


class ConfigError(ValueError):
    pass


def e1(d: int) -> np.ndarray:
    v = np.zeros(d)
    v[0] = 1.0
    return v


@dataclass(frozen=True)
class FramedConfig:
    """Infinitesimal framed configuration of n points in R^d.

    ``v`` has shape (n, n, d) and only entries i < j are meaningful (the
    rest are kept as -v_ji for convenience); ``frames`` has shape (n, d, d).
    """

    v: np.ndarray
    frames: np.ndarray

    @property
    def n(self) -> int:
        return self.frames.shape[0]

    @property
    def d(self) -> int:
        return self.frames.shape[1]

    def vec(self, i: int, j: int) -> np.ndarray:
        """v_ij with 1-based labels."""
        if i < j:
            return self.v[i - 1, j - 1]
        return -self.v[j - 1, i - 1]

    def distance(self, other: "FramedConfig") -> float:
        if (self.n, self.d) != (other.n, other.d):
            return math.inf
        if self.n == 0:
            return 0.0
        iu = np.triu_indices(self.n, 1)
        dv = np.abs(self.v[iu] - other.v[iu]).max() if self.n > 1 else 0.0
        df = np.abs(self.frames - other.frames).max()
        return float(max(dv, df))

    def check(self, tol: float = 1e-9):
        iu = np.triu_indices(self.n, 1)
        if self.n > 1:
            norms = np.linalg.norm(self.v[iu], axis=-1)
            if np.abs(norms - 1).max() > tol:
                raise ConfigError("direction vectors must be unit")
        for A in self.frames:
            if abs(np.linalg.det(A)) < 1e-12:
                raise ConfigError("singular frame")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "v": {f"{i},{j}": self.vec(i, j).tolist() for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1)},
            "frames": self.frames.tolist(),
        }


def make_config(vs: dict, frames, d: int | None = None) -> FramedConfig:
    frames = np.asarray(frames, dtype=float)
    n = frames.shape[0]
    d = d or frames.shape[1]
    v = np.zeros((n, n, d))
    for (i, j), vec in vs.items():
        vec = np.asarray(vec, dtype=float)
        if i > j:
            i, j, vec = j, i, -vec
        v[i - 1, j - 1] = vec
        v[j - 1, i - 1] = -vec
    return FramedConfig(v, frames)


def empty(d: int) -> FramedConfig:
    return FramedConfig(np.zeros((0, 0, d)), np.zeros((0, d, d)))


def point(d: int, frame=None) -> FramedConfig:
    F = np.eye(d) if frame is None else np.asarray(frame, dtype=float)
    return FramedConfig(np.zeros((1, 1, d)), F[None])


def b_tilde(d: int) -> FramedConfig:
    """The doubled point: two points along the long axis, frames I."""
    return make_config({(1, 2): -e1(d)}, np.stack([np.eye(d), np.eye(d)]))


def from_points(xs, frames=None) -> FramedConfig:
    """Infinitesimal configuration of genuinely distinct points."""
    xs = np.asarray(xs, dtype=float)
    n, d = xs.shape
    frames = np.stack([np.eye(d)] * n) if frames is None else np.asarray(frames, dtype=float)
    v = np.zeros((n, n, d))
    for i in range(n):
        for j in range(i + 1, n):
            w = xs[i] - xs[j]
            nw = np.linalg.norm(w)
            if nw == 0:
                raise ConfigError("coincident points need explicit directions")
            v[i, j] = w / nw
            v[j, i] = -w / nw
    return FramedConfig(v, frames.reshape(n, d, d))


def _insert_arrays(U, alpha, pos: int, V, beta):
    """Literal insertion on 0-based arrays: the N-point data (V, beta) goes
    into point ``pos`` of the M-point data (U, alpha)."""
    M = alpha.shape[0]
    N = beta.shape[0]
    d = alpha.shape[1]
    total = M + N - 1

    def idx(j):
        if j < pos:
            return j
        if j < pos + N:
            return pos
        return j - N + 1

    W = np.zeros((total, total, d))
    G = np.zeros((total, d, d))
    A = alpha[pos]
    plain = np.array_equal(A, np.eye(d))
    for j in range(total):
        if pos <= j < pos + N:
            G[j] = A @ beta[j - pos]
        else:
            G[j] = alpha[idx(j)]
    for j in range(total):
        for k in range(j + 1, total):
            if pos <= j < pos + N and pos <= k < pos + N:
                if plain:
                    w = V[j - pos, k - pos]
                else:
                    w = A @ V[j - pos, k - pos]
                    w = w / np.linalg.norm(w)
            else:
                w = U[idx(j), idx(k)]
            W[j, k] = w
            W[k, j] = -w
    return W, G


def insert(c: FramedConfig, i: int, c2: FramedConfig) -> FramedConfig:
    """c o_i c2; for an empty c2 this forgets point i."""
    if c.d != c2.d:
        raise ConfigError("dimension mismatch")
    if not 1 <= i <= c.n:
        raise ConfigError(f"insertion slot {i} out of range 1..{c.n}")
    W, G = _insert_arrays(c.v, c.frames, i - 1, c2.v, c2.frames)
    return FramedConfig(W, G)


def coface(k: int, c: FramedConfig) -> FramedConfig:
    """d^k : C_{n-1} -> C_n for 0 <= k <= n, where n - 1 = c.n."""
    n = c.n + 1
    if not 0 <= k <= n:
        raise ConfigError(f"coface index {k} out of range 0..{n}")
    if c.n == 0:
        return point(c.d)
    b = b_tilde(c.d)
    if k == 0:
        return insert(b, 2, c)
    if k == n:
        return insert(b, 1, c)
    return insert(c, k, b)


def codegeneracy(k: int, c: FramedConfig) -> FramedConfig:
    """s^k: forget point k+1."""
    if not 0 <= k <= c.n - 1:
        raise ConfigError(f"codegeneracy index {k} out of range")
    return insert(c, k + 1, empty(c.d))


def e_config(p: int, d: int) -> FramedConfig:
    """e^p = (d^0)^p of the empty configuration."""
    c = empty(d)
    for _ in range(p):
        c = coface(0, c)
    return c


def forget(c: FramedConfig, keep) -> FramedConfig:
    """Restrict to the (1-based, increasing) labels in ``keep``."""
    idx = [k - 1 for k in keep]
    return FramedConfig(c.v[np.ix_(idx, idx)], c.frames[idx])


def random_config(rng: np.random.Generator, n: int, d: int) -> FramedConfig:
    """Generic configuration: random points and well-conditioned frames."""
    xs = rng.normal(size=(n, d))
    frames = np.stack([np.eye(d) + 0.3 * rng.normal(size=(d, d)) for _ in range(n)]) if n else np.zeros((0, d, d))
    return from_points(xs, frames) if n else empty(d)


# ------------------------------------------------------------ Gram-Schmidt


def gram_schmidt(A) -> np.ndarray:
    """Orthonormalize the columns of A in order (QR with positive diagonal)."""
    A = np.asarray(A, dtype=float)
    if abs(np.linalg.det(A)) < 1e-14 * max(1.0, np.abs(A).max() ** A.shape[0]):
        raise ConfigError("singular frame")
    Qm, R = np.linalg.qr(A)
    s = np.sign(np.diag(R))
    s[s == 0] = 1
    return Qm * s


# -------------------------------------------------------- spatial configs


@dataclass(frozen=True)
class SpatialConfig:
    """Framed configuration in I^d with boundary points x_0 = x_-,
    x_{n+1} = x_+.  Arrays include the two boundary points."""

    points: np.ndarray  # (n+2, d)
    v: np.ndarray  # (n+2, n+2, d)
    frames: np.ndarray  # (n+2, d, d)

    @property
    def n(self) -> int:
        return self.points.shape[0] - 2

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def interior(self) -> tuple:
        return self.points[1:-1], self.v[1:-1, 1:-1], self.frames[1:-1]

    def distance(self, other: "SpatialConfig") -> float:
        if self.points.shape != other.points.shape:
            return math.inf
        N = self.points.shape[0]
        iu = np.triu_indices(N, 1)
        return float(
            max(
                np.abs(self.points - other.points).max(),
                np.abs(self.v[iu] - other.v[iu]).max(),
                np.abs(self.frames - other.frames).max(),
            )
        )

    def to_infinitesimal(self) -> FramedConfig:
        _, v, fr = self.interior()
        return FramedConfig(v.copy(), fr.copy())


def spatial_from_points(xs, frames=None, coincident=None) -> SpatialConfig:
    """Spatial configuration with boundary anchors added.  ``coincident``
    supplies v_ij (1-based interior labels) for equal points."""
    xs = np.asarray(xs, dtype=float)
    n, d = xs.shape
    pts = np.vstack([-e1(d), xs, e1(d)])
    fr = np.stack([np.eye(d)] + ([np.asarray(f, float) for f in frames] if frames is not None else [np.eye(d)] * n) + [np.eye(d)])
    N = n + 2
    v = np.zeros((N, N, d))
    for i in range(N):
        for j in range(i + 1, N):
            w = pts[i] - pts[j]
            nw = np.linalg.norm(w)
            if nw == 0:
                if coincident is None or (i, j) not in coincident:
                    w = -e1(d)
                else:
                    w = np.asarray(coincident[(i, j)], float)
                    nw = 1.0
                    w = w / np.linalg.norm(w)
            else:
                w = w / nw
            v[i, j] = w
            v[j, i] = -w
    return SpatialConfig(pts, v, fr)


def spatial_insert(c: SpatialConfig, i: int, pts2, V2, beta2) -> SpatialConfig:
    """c o_i (inner data) for i in 0..n+1; positions of inserted points
    are those of point i."""
    N = pts2.shape[0]
    W, G = _insert_arrays(c.v, c.frames, i, V2, beta2)
    total = c.points.shape[0] + N - 1
    P = np.zeros((total, c.d))
    for j in range(total):
        if j < i:
            P[j] = c.points[j]
        elif j < i + N:
            P[j] = c.points[i]
        else:
            P[j] = c.points[j - N + 1]
    return SpatialConfig(P, W, G)


def spatial_coface(k: int, c: SpatialConfig) -> SpatialConfig:
    """d^k doubles point k (k = 0 and k = n+1 double the boundary points)."""
    d = c.d
    if not 0 <= k <= c.n + 1:
        raise ConfigError("coface index out of range")
    b = b_tilde(d)
    return spatial_insert(c, k, np.vstack([-e1(d), e1(d)]), b.v, b.frames)


# ------------------------------------------------------------ shrinking H


def lam(x: float) -> float:
    return math.exp(-1.0 / (x * x)) if x > 0 else 0.0


def mu(r: float) -> float:
    a, b = lam(r - SQRT2), lam(2.0 - r)
    if a == 0.0 and b == 0.0:
        return 1.0 if r >= 2 else 0.0
    return a / (a + b)


def nu(r: float) -> float:
    a, b = lam(4.0 - r), lam(r - 2.0)
    if a == 0.0 and b == 0.0:
        return 0.0 if r >= 4 else 1.0
    return a / (a + b)


def H(x, t: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    m, n_ = mu(r), nu(r)
    return (1 - t) * (1 - n_ * t) / (1 - m * t) * x


def H_rejected(x, t: float) -> np.ndarray:
    """The alternative interpolation that fails to give a continuous limit."""
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    m, n_ = mu(r), nu(r)
    return ((1 - m) * (1 - t) ** 2 + m * n_ * (1 - t) + (1 - n_)) * x


def _log_inv_one_minus_mu(r: float) -> float:
    """log(1 / (1 - mu(r))) for sqrt2 < r < 2, without overflow."""
    if r <= SQRT2:
        return 0.0
    e = 1.0 / (2.0 - r) ** 2 - 1.0 / (r - SQRT2) ** 2
    return float(np.logaddexp(0.0, e))


@dataclass(frozen=True)
class Asymptotic:
    """H(x, t) ~ scale * exp(logmag) * dir * (1 - t)^order as t -> 1."""

    order: int
    x: np.ndarray
    logmag: float


def asymptotic(x) -> Asymptotic:
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r < 2.0:
        return Asymptotic(2, x, _log_inv_one_minus_mu(r))
    if r == 2.0:
        return Asymptotic(1, x, 0.0)
    return Asymptotic(0, x, math.log1p(-nu(r)) if nu(r) < 1 else -math.inf)


def limit_direction(ai: Asymptotic, aj: Asymptotic):
    """lim (H(x_i,t) - H(x_j,t)) / |.|, or None when x_i = x_j."""
    if ai.order < aj.order:
        return ai.x / np.linalg.norm(ai.x)
    if ai.order > aj.order:
        return -aj.x / np.linalg.norm(aj.x)
    if np.array_equal(ai.x, aj.x):
        return None
    top = max(ai.logmag, aj.logmag)
    w = ai.x * math.exp(ai.logmag - top) - aj.x * math.exp(aj.logmag - top)
    nw = np.linalg.norm(w)
    if nw == 0:
        return None
    return w / nw


def shrink_limit(points, v, frames) -> FramedConfig:
    """lim_{t->1} H_n(-, t) followed by passage to infinitesimal data.

    ``points`` (n, d); ``v`` (n, n, d) holds the directions to keep for
    coincident points; frames are Gram-Schmidt normalized.
    """
    points = np.asarray(points, dtype=float)
    n, d = points.shape
    asy = [asymptotic(p) for p in points]
    W = np.zeros((n, n, d))
    for i in range(n):
        for j in range(i + 1, n):
            w = limit_direction(asy[i], asy[j])
            if w is None:
                w = v[i, j]
            W[i, j] = w
            W[j, i] = -w
    G = np.stack([gram_schmidt(A) for A in frames]) if n else np.zeros((0, d, d))
    return FramedConfig(W, G)
