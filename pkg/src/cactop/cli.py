"""Command line entry point: ``cactop <module> <command>``."""
from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import action as A
from . import cacti as K
from . import cells as X
from . import configs as G
from . import intervals as I
from . import io
from . import knots as N
from . import trees as T
from . import verify as V
from .rational import RationalError, fmt_q, parse_q


def _emit(as_json: bool, data, text: str):
    if as_json:
        click.echo(json.dumps(data, sort_keys=True))
    else:
        click.echo(text)


def _load(path, kind):
    try:
        return io.load(path, kind)
    except io.SchemaError as ex:
        raise click.ClickException(f"{path}: {ex}") from None


def _parse_t(s: str) -> tuple:
    if not s.strip():
        return ()
    try:
        return A.as_simplex_point(parse_q(x) for x in s.split(","))
    except (RationalError, A.ActionError) as ex:
        raise click.BadParameter(str(ex), param_hint="--t") from None


def _perm(s: str | None, m: int) -> tuple | None:
    if s is None:
        return None
    p = tuple(int(x) for x in s.split(","))
    if sorted(p) != list(range(1, m + 1)):
        raise click.BadParameter(f"need a permutation of 1..{m}")
    return p


json_opt = click.option("--json", "as_json", is_flag=True, help="machine-readable output")


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Spineless cacti, overlapping intervals, and the cactus action on
    the Taylor tower of framed long knots."""


# ------------------------------------------------------------------ trees


@main.group()
def trees():
    """b/w trees indexing the cells of Cact^1."""


@trees.command("enumerate")
@click.argument("m", type=int)
@click.option("--dim", type=int, default=None)
@json_opt
def trees_enumerate(m, dim, as_json):
    try:
        Ts = T.enumerate_bw_trees(m, dim)
    except T.TreeError as ex:
        raise click.ClickException(str(ex)) from None
    _emit(as_json, [t.to_flat() for t in Ts], "\n".join(f"{t.dimension} {t.key()}" for t in Ts))


@trees.command("enum")
@click.option("--m", "m", type=int, required=True)
@click.option("--dim", type=int, default=None)
@json_opt
@click.pass_context
def trees_enum(ctx, m, dim, as_json):
    """Same as ``enumerate`` with the arity as an option."""
    ctx.invoke(trees_enumerate, m=m, dim=dim, as_json=as_json)


@trees.command("collapse")
@click.option("--tree", "tree_file", required=True, type=click.Path(exists=True))
@click.option("--white", type=int, required=True)
@click.option("--angle", type=int, required=True)
@json_opt
def trees_collapse(tree_file, white, angle, as_json):
    tree = _load(tree_file, "tree")
    try:
        out = T.angle_collapse(tree, white, angle)
    except T.TreeError as ex:
        raise click.ClickException(str(ex)) from None
    _emit(as_json, {"kind": "tree", **out.to_flat()}, f"{out.dimension} {out.key()}")


@trees.command("census")
@click.argument("m", type=int)
@json_opt
def trees_census(m, as_json):
    counts = [len(T.enumerate_bw_trees(m, k)) for k in range(m)]
    chi = sum((-1) ** k * c for k, c in enumerate(counts))
    _emit(as_json, {"m": m, "cells_by_dim": counts, "euler": chi}, f"cells by dimension {counts}, euler characteristic {chi}")


@trees.command("stats")
@click.argument("tree_file", type=click.Path(exists=True))
@click.argument("vertex", type=int)
@click.option("--sigma", default=None, help="compatible permutation, e.g. 1,2,3")
@json_opt
def trees_stats(tree_file, vertex, sigma, as_json):
    tree = _load(tree_file, "tree")
    try:
        st = T.tree_stats(tree, vertex, _perm(sigma, tree.m))
    except T.TreeError as ex:
        raise click.ClickException(str(ex)) from None
    data = {"alpha": st.alpha, "lambda": list(st.lam), "rho": list(st.rho), "lambda_plus": list(st.lam_plus or ()), "rho_plus": list(st.rho_plus or ())}
    _emit(as_json, data, "\n".join(f"{k}: {v}" for k, v in data.items()))


# ------------------------------------------------------------------ cacti


@main.group()
def cacti():
    """Spineless cacti and their composition."""


def _cactus_out(C):
    return {"arclist": [[lab, fmt_q(x)] for lab, x in K.to_arclist(C)], "tree": K.underlying_tree(C).key()}


@cacti.command("show")
@click.argument("cactus_file", type=click.Path(exists=True))
@json_opt
def cacti_show(cactus_file, as_json):
    C = _load(cactus_file, "cactus")
    _emit(as_json, _cactus_out(C), f"{K.arclist_str(K.to_arclist(C))}\ntree {K.underlying_tree(C).key()}")


@cacti.command("arclist")
@click.argument("cactus_file", type=click.Path(exists=True))
@json_opt
def cacti_arclist(cactus_file, as_json):
    A_ = K.to_arclist(_load(cactus_file, "cactus"))
    _emit(as_json, [[lab, fmt_q(x)] for lab, x in A_], K.arclist_str(A_))


@cacti.command("tree")
@click.argument("cactus_file", type=click.Path(exists=True))
@json_opt
def cacti_tree(cactus_file, as_json):
    """The underlying tree: the open cell containing the cactus."""
    t = K.underlying_tree(_load(cactus_file, "cactus"))
    _emit(as_json, {"kind": "tree", **t.to_flat()}, f"{t.dimension} {t.key()}")


@cacti.command("compose")
@click.argument("outer", type=click.Path(exists=True))
@click.argument("slot", type=int)
@click.argument("inner", type=click.Path(exists=True))
@click.option("--variant", type=click.Choice(K.VARIANTS), default="projective")
@json_opt
def cacti_compose(outer, slot, inner, variant, as_json):
    C, D = _load(outer, "cactus"), _load(inner, "cactus")
    try:
        out = K.insert(C, slot, D, variant)
    except K.CactusError as ex:
        raise click.ClickException(str(ex)) from None
    _emit(as_json, _cactus_out(out), K.arclist_str(K.to_arclist(out)))


@cacti.command("random")
@click.argument("m", type=int)
@click.option("--seed", type=int, default=0)
@json_opt
def cacti_random(m, seed, as_json):
    import random

    C = K.random_cactus(random.Random(seed), m)
    _emit(as_json, io.to_data(C), K.arclist_str(K.to_arclist(C)))


# --------------------------------------------------------------------- ov


@main.group()
def ov():
    """Overlapping intervals, the Ov^1 gate and the projection p_m."""


@ov.command("compose")
@click.argument("outer", type=click.Path(exists=True))
@click.argument("inners", nargs=-1, type=click.Path(exists=True))
@json_opt
def ov_compose(outer, inners, as_json):
    e = _load(outer, "ov")
    try:
        out = I.ov_compose(e, [_load(p, "ov") for p in inners])
    except I.OvError as ex:
        raise click.ClickException(str(ex)) from None
    _emit(as_json, out.to_json(), json.dumps(out.to_json()))


@ov.command("gate")
@click.argument("ov_file", type=click.Path(exists=True))
@json_opt
def ov_gate(ov_file, as_json):
    e = _load(ov_file, "ov")
    w = I.ov1_membership(e)
    data = {"member": w is not None}
    if w is not None:
        data["tree"] = w.tree.key()
        data["sigma"] = list(w.sigma)
    _emit(as_json, data, "in Ov^1, witness " + f"{data['tree']} sigma={data['sigma']}" if w else "not in Ov^1")


ov.add_command(ov_gate, "member")


@ov.command("project")
@click.argument("ov_file", type=click.Path(exists=True))
@json_opt
def ov_project(ov_file, as_json):
    e = _load(ov_file, "ov")
    w = I.ov1_membership(e)
    if w is None:
        raise click.ClickException("element is not in Ov^1")
    C = I.p_m(e, w)
    _emit(as_json, _cactus_out(C), K.arclist_str(K.to_arclist(C)))


@ov.command("circle")
@click.argument("u")
@json_opt
def ov_circle(u, as_json):
    e = I.ov1_circle(parse_q(u))
    C = I.p_m(e, I.ov1_membership(e))
    data = {"ov": e.to_json(), "cactus": _cactus_out(C)}
    _emit(as_json, data, f"{json.dumps(e.to_json())}\n-> {K.arclist_str(K.to_arclist(C))}")


# ------------------------------------------------------------------ cubes


@main.group()
def cubes():
    """Little 2-cubes and their map to overlapping intervals."""


@cubes.command("to-ov")
@click.argument("cubes_file", type=click.Path(exists=True))
@json_opt
def cubes_to_ov(cubes_file, as_json):
    with open(cubes_file) as fh:
        raw = json.load(fh)
    try:
        cs = [I.Cube2(I.Interval(parse_q(c["x"][0]), parse_q(c["x"][1])), I.Interval(parse_q(c["y"][0]), parse_q(c["y"][1]))) for c in raw]
        e = I.cubes2_to_ov(cs)
    except (KeyError, TypeError, RationalError, I.OvError, ValueError) as ex:
        raise click.ClickException(f"{cubes_file}: {ex}") from None
    _emit(as_json, e.to_json(), json.dumps(e.to_json()))


cubes.add_command(cubes_to_ov, "toov")


# ------------------------------------------------------------------ cells


@main.group()
def cells():
    """The cell complex Cact^1(m), its homology, and cactus fibers."""


@cells.command("betti")
@click.argument("m", type=int)
@click.option("--field", "field_", type=click.Choice(["f2", "q"]), default="f2")
@json_opt
def cells_betti(m, field_, as_json):
    Xm = X.cact1_complex(m)
    b = X.betti(Xm, field_)
    data = {"m": m, "field": field_, "cells": Xm.counts(), "betti": b, "oracle": X.poincare_oracle(m)}
    _emit(as_json, data, f"cells {Xm.counts()}\nbetti {b} (product oracle {data['oracle']})")


@cells.command("complex")
@click.argument("m", type=int)
def cells_complex(m):
    click.echo(json.dumps(X.cact1_complex(m).to_json(), sort_keys=True))


@cells.command("cact1")
@click.option("--m", "m", type=int, required=True)
@click.option("--betti", "with_betti", is_flag=True, help="report Betti numbers instead of the cells")
@click.option("--field", "field_", type=click.Choice(["f2", "q"]), default="f2")
@json_opt
@click.pass_context
def cells_cact1(ctx, m, with_betti, field_, as_json):
    if with_betti:
        ctx.invoke(cells_betti, m=m, field_=field_, as_json=as_json)
    else:
        ctx.invoke(cells_complex, m=m)


@cells.command("fiber")
@click.argument("cactus_file", required=False, type=click.Path(exists=True))
@click.option("--cactus", "cactus_opt", type=click.Path(exists=True), default=None)
@json_opt
def cells_fiber(cactus_file, cactus_opt, as_json):
    path = cactus_opt or cactus_file
    if path is None:
        raise click.UsageError("give a cactus file, positionally or with --cactus")
    C = _load(path, "cactus")
    fc = X.fiber_complex(C)
    rb = X.reduced_betti(fc.complex)
    data = {"cells": fc.complex.counts(), "reduced_betti": rb, "contractible_homology": not any(rb)}
    _emit(as_json, data, f"simplices {data['cells']}, reduced betti {rb}")


# ----------------------------------------------------------------- config


@main.group()
def config():
    """Framed infinitesimal configurations."""


def _config_out(as_json, c):
    _emit(as_json, io.to_data(c), io.dumps(c))


@config.command("insert")
@click.argument("outer", type=click.Path(exists=True))
@click.argument("slot", type=int)
@click.argument("inner", type=click.Path(exists=True))
@json_opt
def config_insert(outer, slot, inner, as_json):
    try:
        c = G.insert(_load(outer, "config"), slot, _load(inner, "config"))
    except G.ConfigError as ex:
        raise click.ClickException(str(ex)) from None
    _config_out(as_json, c)


@config.command("coface")
@click.argument("k", type=int)
@click.argument("config_file", type=click.Path(exists=True))
@json_opt
def config_coface(k, config_file, as_json):
    try:
        c = G.coface(k, _load(config_file, "config"))
    except G.ConfigError as ex:
        raise click.ClickException(str(ex)) from None
    _config_out(as_json, c)


@config.command("shrink")
@click.option("--points", required=True, help="JSON list of points, e.g. [[0,0,0],[1.5,0,0]]")
@json_opt
def config_shrink(points, as_json):
    P = np.asarray(json.loads(points), dtype=float)
    if P.ndim != 2 or len({tuple(p) for p in P}) != len(P):
        raise click.BadParameter("need distinct points of equal dimension", param_hint="--points")
    n, d = P.shape
    c = G.shrink_limit(P, np.zeros((n, n, d)), np.stack([np.eye(d)] * n))
    _config_out(as_json, c)


# -------------------------------------------------------------------- act


@main.group("act")
def act_group():
    """The cactus action on aligned maps."""


def _maps(names: str, n: int, d: int) -> list:
    out = []
    for name in names.split(","):
        name = name.strip()
        if name == "constant":
            out.append(A.constant(n, d))
        else:
            try:
                out.append(A.q_ev(N.get_knot(name, d), n))
            except N.KnotError as ex:
                raise click.BadParameter(str(ex), param_hint="--maps") from None
    return out


@act_group.command("eval")
@click.option("--cactus", "cactus_file", required=True, type=click.Path(exists=True))
@click.option("--maps", "names", required=True, help="comma-separated knot names or 'constant', one per lobe")
@click.option("--t", "t", required=True, help='simplex point, e.g. "-1/2,0,1/3"')
@click.option("--d", "d", type=int, default=3)
@json_opt
def act_eval(cactus_file, names, t, d, as_json):
    C = _load(cactus_file, "cactus")
    tt = _parse_t(t)
    try:
        c = A.act(C, _maps(names, len(tt), d), tt)
    except (A.ActionError, G.ConfigError) as ex:
        raise click.ClickException(str(ex)) from None
    _config_out(as_json, c)


@act_group.command("context")
@click.option("--cactus", "cactus_file", required=True, type=click.Path(exists=True))
@click.option("--t", "t", required=True)
@json_opt
def act_context(cactus_file, t, as_json):
    from .trees import upsilon_str

    ctx = A.action_context(_load(cactus_file, "cactus"), _parse_t(t))
    data = {
        "S": {str(lab): sorted(lc.S) for lab, lc in sorted(ctx.lobes.items())},
        "t_sub": {str(lab): [fmt_q(x) for x in lc.t_sub] for lab, lc in sorted(ctx.lobes.items())},
        "tree": upsilon_str(ctx.tree),
        "root_arity": ctx.root_arity,
    }
    text = "\n".join(f"S_{lab} = {{{', '.join(map(str, s))}}}" for lab, s in data["S"].items())
    _emit(as_json, data, text + f"\nT(C,t) = {data['tree']}")


@act_group.command("verify")
@click.option("--suite", type=click.Choice(sorted(V.ACT_SUITES)), required=True)
@click.option("--seed", type=int, default=0)
@click.option("--cases", type=int, default=100)
@click.option("--tol", type=float, default=None)
@json_opt
def act_verify(suite, seed, cases, tol, as_json):
    _report(V.run_suite(V.ACT_SUITES[suite], seed, cases, tol), as_json)


# ------------------------------------------------------------------ knots


@main.group()
def knots():
    """Framed long knots and the action of overlapping intervals."""


@knots.command("act")
@click.option("--ov", "ov_file", required=True, type=click.Path(exists=True))
@click.option("--knots", "names", required=True, help="comma-separated knot names or sample files")
@click.option("--samples", type=int, default=11)
@json_opt
def knots_act(ov_file, names, samples, as_json):
    e = _load(ov_file, "ov")
    names = [s.strip() for s in names.split(",") if s.strip()]
    try:
        f = N.budney_act(e, [N.get_knot(n) for n in names])
    except N.KnotError as ex:
        raise click.ClickException(str(ex)) from None
    rows = [[float(t)] + f.curve(float(t)).tolist() for t in np.linspace(-1, 1, samples)]
    _emit(as_json, {"curve": rows}, "\n".join(" ".join(f"{x:.6f}" for x in r) for r in rows))


@knots.command("check")
@click.argument("name")
@json_opt
def knots_check(name, as_json):
    try:
        data = N.check_knot(N.get_knot(name))
    except N.KnotError as ex:
        raise click.ClickException(str(ex)) from None
    _emit(as_json, data, "\n".join(f"{k}: {v}" for k, v in data.items()))


# --------------------------------------------------------------- io, verify


@main.command("validate")
@click.argument("path", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(io.KINDS), default=None)
def validate(path, kind):
    """Parse a JSON file and print its canonical form."""
    click.echo(io.dumps(_load(path, kind)))


def _report(rep, as_json, timing=False):
    click.echo(rep.to_json(timing) if as_json else rep.render())
    if not rep.ok:
        sys.exit(1)


@main.command("verify")
@click.argument("suite")
@click.option("--seed", type=int, default=0)
@click.option("--cases", type=int, default=100)
@click.option("--start", type=int, default=0, help="first case index")
@click.option("--tol", type=float, default=None)
@click.option("--timing", is_flag=True, help="include wall time in JSON output")
@json_opt
def verify_cmd(suite, seed, cases, start, tol, timing, as_json):
    """Run a property suite; 'all' runs every main suite."""
    names = V.MAIN_SUITES if suite == "all" else (suite,)
    ok = True
    for name in names:
        try:
            rep = V.run_suite(name, seed, cases, tol, start)
        except V.UnknownSuite:
            raise click.UsageError(f"unknown suite {suite!r}; choose from {', '.join(V.MAIN_SUITES)} or all") from None
        click.echo(rep.to_json(timing) if as_json else rep.render())
        ok = ok and rep.ok
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
