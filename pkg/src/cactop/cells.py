"""Cell complexes: the regular CW structure of Cact^1(m) indexed by b/w
trees, homology ranks over F2 and Q, and the simplicial fibre complexes
of the projection Ov^1(m) -> Cact^1(m)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cacti import Cactus, minimal
from .intervals import white_bounds
from .trees import (
    BwTree,
    alpha_black,
    collapses,
    compatible_permutations,
    enumerate_bw_trees,
    invert,
)

Q = Fraction


class ComplexError(ValueError):
    pass


@dataclass
class CellComplex:
    """Cells by dimension; ``boundary[k]`` maps a k-cell index to a dict
    {(k-1)-cell index: integer coefficient}.  Over F2 only parity matters."""

    cells: dict = field(default_factory=dict)  # dim -> list of cell metadata
    boundary: dict = field(default_factory=dict)  # dim -> list of dicts

    @property
    def dim(self) -> int:
        return max((k for k, v in self.cells.items() if v), default=-1)

    def counts(self) -> list:
        return [len(self.cells.get(k, [])) for k in range(self.dim + 1)]

    def euler(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))

    def to_json(self) -> list:
        out = []
        for k in range(self.dim + 1):
            for idx, meta in enumerate(self.cells[k]):
                faces = self.boundary.get(k, [{}] * len(self.cells[k]))[idx]
                out.append(
                    {
                        "dim": k,
                        "id": idx,
                        "cell": meta if isinstance(meta, (str, int)) else str(meta),
                        "faces": sorted([f, c] for f, c in faces.items() if c),
                    }
                )
        return out


# -------------------------------------------------------------- linear algebra


def rank_f2(rows: Sequence[int]) -> int:
    """Rank over F2 of row bitmasks."""
    pivots: dict = {}
    r = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top in pivots:
                row ^= pivots[top]
            else:
                pivots[top] = row
                r += 1
                break
    return r


def rank_q(rows: Sequence[dict], ncols: int) -> int:
    """Rank over Q via fraction-free (Bareiss style) elimination on sparse
    integer rows."""
    work = [dict(r) for r in rows if any(r.values())]
    rank = 0
    pivots: dict = {}  # col -> row
    for row in work:
        row = {k: v for k, v in row.items() if v}
        while row:
            col = min(row)
            if col not in pivots:
                pivots[col] = row
                rank += 1
                break
            prow = pivots[col]
            a, b = prow[col], row[col]
            new = {}
            for k in set(row) | set(prow):
                v = a * row.get(k, 0) - b * prow.get(k, 0)
                if v:
                    new[k] = v
            g = 0
            for v in new.values():
                g = _gcd(g, v)
            if g > 1:
                new = {k: v // g for k, v in new.items()}
            row = new
    return rank


def _gcd(a, b):
    import math

    return math.gcd(a, b)


def _boundary_rows_f2(X: CellComplex, k: int) -> list:
    rows = []
    for faces in X.boundary.get(k, []):
        mask = 0
        for f, c in faces.items():
            if c % 2:
                mask |= 1 << f
        rows.append(mask)
    return rows


def check_d2(X: CellComplex, field_: str = "f2"):
    for k in range(2, X.dim + 1):
        for idx, faces in enumerate(X.boundary.get(k, [])):
            acc: dict = {}
            for f, c in faces.items():
                for g, c2 in X.boundary[k - 1][f].items():
                    acc[g] = acc.get(g, 0) + c * c2
            if field_ == "f2":
                bad = any(v % 2 for v in acc.values())
            else:
                bad = any(acc.values())
            if bad:
                raise ComplexError(f"boundary of boundary nonzero at {k}-cell {idx}")


def betti(X: CellComplex, field_: str = "f2") -> list:
    if field_ not in ("f2", "q"):
        raise ComplexError(f"unknown field {field_!r}")
    check_d2(X, field_)
    n = X.dim
    ranks = [0] * (n + 2)
    for k in range(1, n + 1):
        if field_ == "f2":
            ranks[k] = rank_f2(_boundary_rows_f2(X, k))
        else:
            ranks[k] = rank_q(X.boundary.get(k, []), len(X.cells[k - 1]))
    counts = X.counts()
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(n + 1)]


def reduced_betti(X: CellComplex, field_: str = "f2") -> list:
    b = betti(X, field_)
    if b:
        b[0] -= 1
    return b


# ---------------------------------------------------------- Cact^1(m) cells


def collapse_sign(T: BwTree, w: int, i: int) -> int:
    """Orientation sign of the face of E(T) = prod Delta^{|w_l|} obtained
    by the i-th coface in the factor of white w."""
    before = sum(T.white(l).arity for l in range(1, w))
    return (-1) ** (before + i)


def cact1_complex(m: int) -> CellComplex:
    trees = enumerate_bw_trees(m)
    by_dim: dict = {}
    for T in trees:
        by_dim.setdefault(T.dimension, []).append(T)
    index = {k: {T: n for n, T in enumerate(v)} for k, v in by_dim.items()}
    X = CellComplex()
    for k, ts in by_dim.items():
        X.cells[k] = ts
        if k == 0:
            continue
        rows = []
        for T in ts:
            faces: dict = {}
            for w, i, T2 in collapses(T):
                f = index[k - 1][T2]
                faces[f] = faces.get(f, 0) + collapse_sign(T, w, i)
            rows.append(faces)
        X.boundary[k] = rows
    return X


def poincare_oracle(m: int) -> list:
    """Coefficients of prod_{i=1}^{m-1} (1 + i t)."""
    coeffs = [1]
    for i in range(1, m):
        nxt = coeffs + [0]
        for k in range(len(coeffs)):
            nxt[k + 1] += i * coeffs[k]
        coeffs = nxt
    return coeffs


def action_is_free(m: int) -> bool:
    trees = enumerate_bw_trees(m)
    ident = tuple(range(1, m + 1))
    for sigma in itertools.permutations(range(1, m + 1)):
        if sigma == ident:
            continue
        if any(T.act(sigma) == T for T in trees):
            return False
    return True


# --------------------------------------------------------------- fibres


@dataclass
class FiberComplex:
    tree: BwTree
    complex: CellComplex
    boxes: dict  # sigma -> list of (lo, hi) per coordinate, in units of h
    simplices: dict  # dim -> list of keys


def _black_intervals(C: Cactus) -> dict:
    """K = ([x_v, y_v]) determined by a normalized cactus on its tree."""
    T = C.tree
    m = T.m
    h = Q(2, m)
    K = {(): (Q(-1), Q(1))}
    any_sigma = compatible_permutations(T)[0]

    def visit(path):
        xv, yv = K[path]
        for w in T.blacks[path][0].whites:
            lab = w.label
            # b_i and c_i do not depend on sigma
            bd = white_bounds(T, any_sigma, lab, xv, yv)
            pos = bd.b
            kids = T.black_children(lab)
            arcs = C.arcs[lab]
            for q, p in enumerate(kids):
                pos += arcs[q] * h
                ln = alpha_black(T, p) * h
                K[p] = (pos, pos + ln)
                pos += ln
            for p in kids:
                visit(p)

    visit(())
    return K


def fiber_boxes(C: Cactus) -> tuple:
    """Per compatible sigma, the lattice box of (x_i - x_v, y_i - x_v) / h."""
    C = minimal(C.normalized())
    T = C.tree
    m = T.m
    h = Q(2, m)
    K = _black_intervals(C)
    boxes = {}
    for sigma in compatible_permutations(T):
        box = []
        for lab in range(1, m + 1):
            xv, yv = K[T.parent_black(lab)]
            bd = white_bounds(T, sigma, lab, xv, yv)
            lo_x, hi_x = (bd.a - xv) / h, (bd.b - xv) / h
            lo_y, hi_y = (bd.c - xv) / h, (bd.d - xv) / h
            for v in (lo_x, hi_x, lo_y, hi_y):
                if v.denominator != 1:
                    raise ComplexError("fibre bounds off the lattice")
            box.append((int(lo_x), int(hi_x)))
            box.append((int(lo_y), int(hi_y)))
        boxes[sigma] = box
    return C, K, boxes


def _kuhn_top(box) -> list:
    free = [c for c, (lo, hi) in enumerate(box) if hi > lo]
    ranges = [range(box[c][0], box[c][1]) for c in free]
    base0 = [lo for lo, _ in box]
    out = []
    for z in itertools.product(*ranges):
        base = list(base0)
        for c, v in zip(free, z):
            base[c] = v
        for perm in itertools.permutations(free):
            v = list(base)
            verts = [tuple(v)]
            for c in perm:
                v[c] += 1
                verts.append(tuple(v))
            out.append(frozenset(verts))
    return out


def _intervals_at(face, T: BwTree, K: dict, m: int) -> dict:
    h = Q(2, m)
    n = len(face)
    bary = [sum(Q(v[c]) for v in face) / n for c in range(2 * m)]
    ivs = {}
    for lab in range(1, m + 1):
        xv = K[T.parent_black(lab)][0]
        ivs[lab] = (xv + bary[2 * lab - 2] * h, xv + bary[2 * lab - 1] * h)
    return ivs


def _order_at(face, sigma, T: BwTree, K: dict, m: int, siblings_only: bool) -> frozenset:
    """Height order on the pairs overlapping at the barycentre of a face.

    Only sibling pairs can be ordered differently by two permutations
    compatible with T, and their overlap condition is cut out by lattice
    hyperplanes, so on sibling pairs the order is constant on open
    simplices and identifies simplices across boxes.
    """
    ivs = _intervals_at(face, T, K, m)
    hinv = invert(sigma)
    pairs = set()
    for i, j in itertools.permutations(range(1, m + 1), 2):
        if siblings_only and T.parent_black(i) != T.parent_black(j):
            continue
        a, b = ivs[i], ivs[j]
        if max(a[0], b[0]) < min(a[1], b[1]) and hinv[i - 1] < hinv[j - 1]:
            pairs.add((i, j))
    return frozenset(pairs)


def fiber_complex(C: Cactus) -> FiberComplex:
    """The fibre p_m^{-1}(C) as a simplicial complex glued from the
    Kuhn-triangulated lattice boxes of every compatible sigma."""
    C, K, boxes = fiber_boxes(C)
    T = C.tree
    m = T.m
    faces_of: dict = {}  # key -> full order seen first
    for sigma, box in boxes.items():
        seen = set()
        for top in _kuhn_top(box):
            verts = sorted(top)
            for r in range(1, len(verts) + 1):
                for face in itertools.combinations(verts, r):
                    if face in seen:
                        continue
                    seen.add(face)
                    key = (face, _order_at(face, sigma, T, K, m, True))
                    full = _order_at(face, sigma, T, K, m, False)
                    prev = faces_of.setdefault(key, full)
                    if prev != full:
                        raise ComplexError("inconsistent gluing across permutations")
    X = CellComplex()
    index: dict = {}
    ordered: dict = {}
    for key in faces_of:
        ordered.setdefault(len(key[0]) - 1, []).append(key)
    for d in sorted(ordered):
        ks = sorted(ordered[d], key=lambda k: (k[0], sorted(k[1])))
        ordered[d] = ks
        index[d] = {k: n for n, k in enumerate(ks)}
        X.cells[d] = ks
    for d in sorted(ordered):
        if d == 0:
            continue
        rows = []
        for verts, order in ordered[d]:
            faces = {}
            for drop in range(len(verts)):
                face = verts[:drop] + verts[drop + 1 :]
                fkey = (face, _restrict(order, face, T, K, m))
                if fkey not in index[d - 1]:
                    raise ComplexError("face missing from fibre complex")
                f = index[d - 1][fkey]
                faces[f] = faces.get(f, 0) + (-1) ** drop
            rows.append(faces)
        X.boundary[d] = rows
    return FiberComplex(T, X, boxes, ordered)


def _restrict(order: frozenset, face, T, K, m) -> frozenset:
    ivs = _intervals_at(face, T, K, m)
    return frozenset(
        (i, j) for i, j in order if max(ivs[i][0], ivs[j][0]) < min(ivs[i][1], ivs[j][1])
    )


def sample_cactus(T: BwTree) -> Cactus:
    """Interior point of the cell of T with equal barycentric parts."""
    arcs = {}
    for lab in range(1, T.m + 1):
        k = T.white(lab).arity + 1
        arcs[lab] = (Q(1, k),) * k
    return Cactus(T, arcs, (Q(1),) * T.m)
