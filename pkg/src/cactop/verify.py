"""Seeded property suites shared by the CLI and the test suite.

Every case draws from its own generator seeded by (suite, seed, case
index), so a failing case can be rerun alone with ``--start``.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import action as A
from . import cacti as K
from . import cells as X
from . import configs as G
from . import intervals as I
from . import knots as N
from .trees import enumerate_bw_trees, invert


@dataclass
class RunReport:
    suite: str
    seed: int
    cases: int
    max_deviation: float = 0.0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = False) -> str:
        data = {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "max_deviation": float(f"{self.max_deviation:.17g}"),
            "failures": self.failures,
            "ok": self.ok,
            "extra": self.extra,
        }
        if timing:
            data["wall_time"] = round(self.wall_time, 3)
        return json.dumps(data, sort_keys=True)

    def render(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{status} {self.suite}: {self.cases} cases, max deviation {self.max_deviation:.3g}, {self.wall_time:.2f}s"]
        for key, val in sorted(self.extra.items()):
            lines.append(f"  {key}: {val}")
        for f in self.failures:
            lines.append(f"  case {f['case']}: {f['detail']}")
            lines.append(f"    rerun: {f['repro']}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Suite:
    name: str
    case: Callable  # (rng, np_rng, index) -> (deviation, detail or None)
    tol: float
    fixed_cases: int | None = None  # deterministic suites ignore --cases
    extra: Callable | None = None


def case_rngs(suite: str, seed: int, k: int):
    return random.Random(f"{suite}:{seed}:{k}"), np.random.default_rng([seed, k, len(suite)])


# ----------------------------------------------------------- operad suites


def _rand_cactus(R, lo=1, hi=4):
    return K.random_cactus(R, R.randint(lo, hi))


def _equivariance_rhs(compose, act, C, Ds, s):
    """gamma(C s; D) = gamma(C; D_{s^-1(1)}, ..) . block(s, sizes)."""
    si = invert(s)
    inner = [Ds[si[i] - 1] for i in range(len(s))]
    return act(compose(C, inner), K.block_permutation(s, [arity(D) for D in inner]))


def arity(x) -> int:
    return x.m


def pcact_case(R, _nr, _k, tol=0.0):
    C = _rand_cactus(R)
    D = _rand_cactus(R, 1, 3)
    E = _rand_cactus(R, 1, 3)
    i = R.randint(1, C.m)
    j = R.randint(1, D.m)
    bad = []
    if K.insert(K.insert(C, i, D), i + j - 1, E) != K.insert(C, i, K.insert(D, j, E)):
        bad.append("sequential associativity")
    if C.m >= 2:
        a, b = sorted(R.sample(range(1, C.m + 1), 2))
        if K.insert(K.insert(C, b, E), a, D) != K.insert(K.insert(C, a, D), b + D.m - 1, E):
            bad.append("parallel associativity")
    if K.insert(C, i, K.unit()) != C or K.insert(K.unit(), 1, C) != C:
        bad.append("unit")
    Ds = [_rand_cactus(R, 1, 3) for _ in range(C.m)]
    s = tuple(R.sample(range(1, C.m + 1), C.m))
    if K.compose(K.sigma_act(C, s), Ds) != _equivariance_rhs(K.compose, K.sigma_act, C, Ds, s):
        bad.append("equivariance")
    return (1.0 if bad else 0.0), (", ".join(bad) or None)


def ov_case(R, _nr, _k, tol=0.0):
    e = I.random_ov(R, R.randint(1, 4))
    f = I.random_ov(R, R.randint(0, 3))
    g = I.random_ov(R, R.randint(0, 3))
    bad = []
    i = R.randint(1, e.m)
    if f.m:
        j = R.randint(1, f.m)
        if not I.ov_equal(I.ov_insert(I.ov_insert(e, i, f), i + j - 1, g), I.ov_insert(e, i, I.ov_insert(f, j, g))):
            bad.append("sequential associativity")
    if e.m >= 2:
        a, b = sorted(R.sample(range(1, e.m + 1), 2))
        if not I.ov_equal(I.ov_insert(I.ov_insert(e, b, g), a, f), I.ov_insert(I.ov_insert(e, a, f), b + f.m - 1, g)):
            bad.append("parallel associativity")
    if not (I.ov_equal(I.ov_insert(e, i, I.ov_identity()), e) and I.ov_equal(I.ov_insert(I.ov_identity(), 1, e), e)):
        bad.append("unit")
    Ds = [I.random_ov(R, R.randint(0, 3)) for _ in range(e.m)]
    if not I.ov_equal(I.ov_compose(e, Ds), I.ov_compose_by_heights(e, Ds)):
        bad.append("composition vs height oracle")
    s = tuple(R.sample(range(1, e.m + 1), e.m))
    rhs = _equivariance_rhs(I.ov_compose, lambda x, p: x.act(p), e, Ds, s)
    if not I.ov_equal(I.ov_compose(e.act(s), Ds), rhs):
        bad.append("equivariance")
    return (1.0 if bad else 0.0), (", ".join(bad) or None)


def cubes_case(R, _nr, _k, tol=0.0):
    c = I.random_cubes(R, R.randint(1, 4))
    ds = [I.random_cubes(R, R.randint(1, 3)) for _ in c]
    bad = []
    lhs = I.cubes2_to_ov(I.cubes_compose(c, ds))
    rhs = I.ov_compose(I.cubes2_to_ov(c), [I.cubes2_to_ov(d) for d in ds])
    if not I.ov_equal(lhs, rhs):
        bad.append("composition")
    if not I.ov_equal(I.cubes2_to_ov([I.Cube2(I.UNIT, I.UNIT)]), I.ov_identity()):
        bad.append("unit")
    s = tuple(R.sample(range(1, len(c) + 1), len(c)))
    if not I.ov_equal(I.cubes2_to_ov([c[k - 1] for k in s]), I.cubes2_to_ov(c).act(s)):
        bad.append("equivariance")
    return (1.0 if bad else 0.0), (", ".join(bad) or None)


def pm_case(R, _nr, _k, tol=0.0, m=3):
    e, T, sigma = I.random_ov1(R, m)
    ws = I.ov1_witnesses(e)
    if not ws:
        return 1.0, "generated element failed the membership gate"
    images = {I.p_m(e, w) for w in ws}
    if len(images) != 1:
        return 1.0, f"{len(ws)} witnesses gave {len(images)} different cacti"
    if images.pop() != I.p_m_by_heights(e):
        return 1.0, "disagrees with the height oracle"
    return 0.0, None


def cells_case(_R, _nr, k, tol=0.0):
    m = k + 1
    bad = []
    Xm = X.cact1_complex(m)
    for fld in ("f2", "q"):
        X.check_d2(Xm, fld)
        if X.betti(Xm, fld) != X.poincare_oracle(m):
            bad.append(f"betti over {fld} = {X.betti(Xm, fld)}")
    if Xm.euler() != (1 if m == 1 else 0):
        bad.append("euler characteristic")
    if not X.action_is_free(m):
        bad.append("symmetric action not free")
    return (1.0 if bad else 0.0), (", ".join(bad) or None)


def cells_extra():
    return {f"betti m={m}": X.betti(X.cact1_complex(m)) for m in range(1, 5)}


_FIBER_CELLS = [T for m in (1, 2, 3) for T in enumerate_bw_trees(m)]


def fibers_case(_R, _nr, k, tol=0.0):
    T = _FIBER_CELLS[k]
    fc = X.fiber_complex(X.sample_cactus(T))
    rb = X.reduced_betti(fc.complex)
    if any(rb):
        return 1.0, f"tree {T.key()}: reduced betti {rb}"
    return 0.0, None


# ---------------------------------------------------------- configurations


def cosimplicial_deviation(nr, n: int, d: int) -> float:
    """Worst deviation over all cosimplicial identities at level n."""
    worst = 0.0
    c = G.random_config(nr, n - 1, d)
    for j in range(n + 1):
        for i in range(j):
            worst = max(worst, G.coface(j, G.coface(i, c)).distance(G.coface(i, G.coface(j - 1, c))))
    c2 = G.random_config(nr, n, d)
    for j in range(n):
        for i in range(n + 1):
            lhs = G.codegeneracy(j, G.coface(i, c2))
            if i < j:
                rhs = G.coface(i, G.codegeneracy(j - 1, c2))
            elif i in (j, j + 1):
                rhs = c2
            else:
                rhs = G.coface(i - 1, G.codegeneracy(j, c2))
            worst = max(worst, lhs.distance(rhs))
    for j in range(n - 1):
        for i in range(j + 1):
            worst = max(worst, G.codegeneracy(j, G.codegeneracy(i, c2)).distance(G.codegeneracy(i, G.codegeneracy(j + 1, c2))))
    return worst


def insert_assoc_deviation(nr, R, d: int) -> float:
    a = G.random_config(nr, R.randint(1, 4), d)
    b = G.random_config(nr, R.randint(0, 4), d)
    c = G.random_config(nr, R.randint(0, 4), d)
    i = R.randint(1, a.n)
    worst = G.insert(a, i, G.point(d)).distance(a)
    if b.n:
        j = R.randint(1, b.n)
        worst = max(worst, G.insert(G.insert(a, i, b), i + j - 1, c).distance(G.insert(a, i, G.insert(b, j, c))))
    return worst


def configs_case(R, nr, _k, tol=1e-12, d=None):
    d = d or R.choice((2, 3, 4))
    n = R.randint(1, 5)
    dev = max(cosimplicial_deviation(nr, n, d), insert_assoc_deviation(nr, R, d))
    return dev, (None if dev <= tol else f"d={d} n={n} deviation {dev:.3g}")


# ------------------------------------------------------------------ action


KNOT_NAMES = ("trefoil", "twist", "identity")


def random_maps(R, m: int, n: int, d: int = 3) -> list:
    return [A.q_ev(N.get_knot(R.choice(KNOT_NAMES), d), n) for _ in range(m)]


def random_t(R, n: int, denom: int = 24) -> tuple:
    from fractions import Fraction

    return tuple(sorted(Fraction(R.randint(-denom, denom), denom) for _ in range(n)))


def action_unit(R):
    n = R.randint(1, 4)
    phi = random_maps(R, 1, n)[0]
    t = random_t(R, n)
    return A.act(K.random_cactus(R, 1), [phi], t).distance(phi(t))


def action_equivariance(R):
    m, n = R.randint(1, 3), R.randint(1, 4)
    C = K.random_cactus(R, m)
    maps = random_maps(R, m, n)
    s = tuple(R.sample(range(1, m + 1), m))
    t = random_t(R, n)
    lhs = A.act(K.sigma_act(C, invert(s)), maps, t)
    rhs = A.act(C, [maps[s[i] - 1] for i in range(m)], t)
    return lhs.distance(rhs)


def action_associativity(R):
    m, m2, n = R.randint(1, 3), R.randint(1, 3), R.randint(1, 4)
    C, C2 = K.random_cactus(R, m), K.random_cactus(R, m2)
    ell = R.randint(1, m)
    phi, psi = random_maps(R, m, n), random_maps(R, m2, n)
    t = random_t(R, n)
    lhs = A.act(K.insert(C, ell, C2), phi[: ell - 1] + psi + phi[ell:], t)
    rhs = A.act(C, phi[: ell - 1] + [A.action_map(C2, psi)] + phi[ell:], t)
    return lhs.distance(rhs)


def action_order(R):
    m, n = R.randint(1, 3), R.randint(1, 4)
    C = K.random_cactus(R, m)
    maps = random_maps(R, m, n)
    t = random_t(R, n)
    return A.act(C, maps, t).distance(A.act_with_order(C, maps, t, R))


ACTION_CHECKS = {
    "unit": (action_unit, 0.0),
    "equivariance": (action_equivariance, 1e-10),
    "associativity": (action_associativity, 1e-10),
    "order": (action_order, 1e-12),
}


def _action_suite_case(names):
    def case(R, _nr, _k, tol=None):
        worst = 0.0
        bad = []
        for name in names:
            fn, default = ACTION_CHECKS[name]
            dev = fn(R)
            worst = max(worst, dev)
            limit = default if tol is None or name == "unit" else max(tol, 0.0)
            if dev > limit:
                bad.append(f"{name} deviation {dev:.3g}")
        return worst, (", ".join(bad) or None)

    return case


def faces_case(R, _nr, _k, tol=1e-8):
    m, n = R.randint(1, 3), R.randint(1, 4)
    C = K.random_cactus(R, m)
    maps = random_maps(R, m, n)
    dev = max(A.face_coherence(A.action_map(C, maps), R, 2), max(A.face_coherence(p, R, 1) for p in maps))
    return dev, (None if dev <= tol else f"m={m} n={n} face deviation {dev:.3g}")


def projection_case(R, _nr, _k, tol=1e-10):
    m, n = R.randint(1, 3), R.randint(2, 4)
    C = K.random_cactus(R, m)
    maps = random_maps(R, m, n)
    t = random_t(R, n - 1)
    lhs = A.act(C, [A.tower_project(p) for p in maps], t)
    rhs = A.tower_project(A.action_map(C, maps))(t)
    dev = lhs.distance(rhs)
    return dev, (None if dev <= tol else f"m={m} n={n} deviation {dev:.3g}")


# ------------------------------------------------------------------ knots


def _rand_knots(R, m, d=3):
    return [N.get_knot(R.choice(KNOT_NAMES), d) for _ in range(m)]


def budney_case(R, _nr, k, tol=1e-10):
    bad = []
    worst = 0.0
    e = I.random_ov(R, R.randint(1, 3))
    inners = [I.random_ov(R, R.randint(0, 2)) for _ in range(e.m)]
    ks = [_rand_knots(R, D.m) for D in inners]
    flat = [f for group in ks for f in group]
    lhs = N.budney_act(I.ov_compose(e, inners), flat)
    rhs = N.budney_act(e, [N.budney_act(D, g) for D, g in zip(inners, ks)])
    dev = N.knot_distance(lhs, rhs, samples=12, seed=k)
    worst = max(worst, dev)
    if dev > tol:
        bad.append(f"composition {dev:.3g}")
    f = _rand_knots(R, 1)[0]
    dev = N.knot_distance(N.budney_act(I.ov_identity(), [f]), f, samples=12, seed=k)
    worst = max(worst, dev)
    if dev > tol:
        bad.append(f"unit {dev:.3g}")
    g = N.budney_act(e, _rand_knots(R, e.m))
    for x1 in (-3.0, -1.5, 1.5, 3.0):
        x = np.array([x1, R.uniform(-0.5, 0.5), R.uniform(-0.5, 0.5)])
        dev = float(np.abs(g(x) - x).max())
        worst = max(worst, dev)
        if dev > tol:
            bad.append(f"identity outside I {dev:.3g}")
    exts = e.linear_extensions()
    if len(exts) > 1:
        fs = _rand_knots(R, e.m)
        a, b = N.budney_act(e, fs, exts[0]), N.budney_act(e, fs, exts[-1])
        dev = N.knot_distance(a, b, samples=12, seed=k)
        worst = max(worst, dev)
        if dev > tol:
            bad.append(f"linear extensions {dev:.3g}")
    # disjoint supports commute, exactly on the curve
    cuts = sorted(R.sample(range(-12, 13), 3))
    L1 = I.Interval(I.Q(cuts[0], 12), I.Q(cuts[1], 12))
    L2 = I.Interval(I.Q(cuts[1], 12), I.Q(cuts[2], 12))
    fs = _rand_knots(R, 2)
    up = N.budney_act(I.OvElement((L1, L2), frozenset()), fs, (1, 2))
    down = N.budney_act(I.OvElement((L1, L2), frozenset()), fs, (2, 1))
    for t in np.linspace(-1.2, 1.2, 25):
        if not np.array_equal(up.curve(t), down.curve(t)):
            bad.append("disjoint supports do not commute")
            worst = max(worst, float(np.abs(up.curve(t) - down.curve(t)).max()))
            break
    m = R.randint(0, 4)
    star = N.budney_act(I.star_ov(m) if m else I.OvElement((), frozenset()), [N.identity()] * m)
    for t in np.linspace(-1.5, 1.5, 13):
        if not np.array_equal(star.curve(t), N.identity().curve(t)):
            bad.append("star action moves the identity knot")
            break
    return worst, (", ".join(bad) or None)


# --------------------------------------------------------------- registry


SUITES = {
    "ov-operad": Suite("ov-operad", ov_case, 0.0),
    "pcact-operad": Suite("pcact-operad", pcact_case, 0.0),
    "cubes-map": Suite("cubes-map", cubes_case, 0.0),
    "p-m": Suite("p-m", pm_case, 0.0),
    "cells": Suite("cells", cells_case, 0.0, fixed_cases=4, extra=cells_extra),
    "fibers": Suite("fibers", fibers_case, 0.0, fixed_cases=len(_FIBER_CELLS)),
    "configs-cosimplicial": Suite("configs-cosimplicial", configs_case, 1e-12),
    "action-axioms": Suite("action-axioms", _action_suite_case(list(ACTION_CHECKS)), 1e-10),
    "action-faces": Suite("action-faces", faces_case, 1e-8),
    "projection-compat": Suite("projection-compat", projection_case, 1e-10),
    "budney": Suite("budney", budney_case, 1e-10),
}

ACT_SUITES = {
    "unit": Suite("action-unit", _action_suite_case(["unit"]), 0.0),
    "equivariance": Suite("action-equivariance", _action_suite_case(["equivariance"]), 1e-10),
    "associativity": Suite("action-associativity", _action_suite_case(["associativity", "order"]), 1e-10),
    "faces": SUITES["action-faces"],
    "projection": SUITES["projection-compat"],
}


for _s in ACT_SUITES.values():
    SUITES.setdefault(_s.name, _s)

# the suites named in the command-line contract, in display order
MAIN_SUITES = (
    "ov-operad", "pcact-operad", "cubes-map", "p-m", "cells", "fibers",
    "configs-cosimplicial", "action-axioms", "action-faces", "projection-compat", "budney",
)


class UnknownSuite(KeyError):
    pass


def run_suite(suite, seed: int = 0, cases: int = 100, tol: float | None = None, start: int = 0) -> RunReport:
    if isinstance(suite, str):
        if suite not in SUITES:
            raise UnknownSuite(suite)
        suite = SUITES[suite]
    tol = suite.tol if tol is None else tol
    if suite.fixed_cases is not None:
        indices = range(start, min(start + cases, suite.fixed_cases))
    else:
        indices = range(start, start + cases)
    rep = RunReport(suite.name, seed, len(indices))
    t0 = time.perf_counter()
    for k in indices:
        R, nr = case_rngs(suite.name, seed, k)
        try:
            dev, detail = suite.case(R, nr, k, tol=tol)
        except Exception as ex:  # noqa: BLE001 - a crashing case is a failure
            dev, detail = float("inf"), f"{type(ex).__name__}: {ex}"
        rep.max_deviation = max(rep.max_deviation, dev)
        if detail is not None:
            rep.failures.append(
                {
                    "case": k,
                    "detail": detail,
                    "repro": f"cactop verify {suite.name} --seed {seed} --start {k} --cases 1",
                }
            )
    if suite.extra is not None:
        rep.extra = {k: str(v) for k, v in suite.extra().items()}
    rep.wall_time = time.perf_counter() - t0
    return rep
