"""Planted b/w trees, angle collapses, compatibility with permutations and
the per-vertex statistics used by the normalized interval bounds.

A b/w tree is stored as nested immutable nodes: a ``Black`` node holds an
ordered tuple of ``White`` children and a ``White`` node holds its label and
an ordered tuple of ``Black`` children.  The root is always black.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


class TreeError(ValueError):
    pass


class CompatibilityError(TreeError):
    pass


@dataclass(frozen=True)
class White:
    label: int
    blacks: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.blacks)


@dataclass(frozen=True)
class Black:
    whites: tuple = ()


def _ser_black(b: Black) -> str:
    return "b(" + ",".join(_ser_white(w) for w in b.whites) + ")"


def _ser_white(w: White) -> str:
    return f"w{w.label}(" + ",".join(_ser_black(b) for b in w.blacks) + ")"


# black vertex address: tuple of (white position, black position) steps from
# the root; the root itself is ()
BlackPath = tuple


class BwTree:
    """Planted b/w tree with labelled white vertices 1..m."""

    __slots__ = ("root", "m", "_key", "_index", "_dim")

    def __init__(self, root: Black):
        self.root = root
        labels = sorted(w.label for w in _iter_whites(root))
        self.m = len(labels)
        if labels != list(range(1, self.m + 1)):
            raise TreeError(f"white labels must be 1..m, got {labels}")
        self._key = _ser_black(root)
        self._index = None
        self._dim = None
        _validate(root, is_root=True)

    @classmethod
    def _trusted(cls, root: Black, m: int, key: str, dim: int) -> "BwTree":
        """Skip validation; the caller guarantees a valid tree."""
        t = cls.__new__(cls)
        t.root, t.m, t._key, t._index, t._dim = root, m, key, None, dim
        return t

    # identity
    def key(self) -> str:
        return self._key

    def __eq__(self, other):
        return isinstance(other, BwTree) and self._key == other._key

    def __lt__(self, other):
        return (self.dimension, self._key) < (other.dimension, other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"BwTree({self._key})"

    # structure
    def _build_index(self):
        whites = {}
        blacks = {}

        def walk_black(b, path, parent_white):
            blacks[path] = (b, parent_white)
            for pos, w in enumerate(b.whites):
                whites[w.label] = (w, path, pos)
                for q, bb in enumerate(w.blacks):
                    walk_black(bb, path + ((pos, q),), w.label)

        walk_black(self.root, (), None)
        self._index = (whites, blacks)

    @property
    def whites(self) -> dict:
        if self._index is None:
            self._build_index()
        return self._index[0]

    @property
    def blacks(self) -> dict:
        if self._index is None:
            self._build_index()
        return self._index[1]

    def white(self, label: int) -> White:
        return self.whites[label][0]

    def parent_black(self, label: int) -> BlackPath:
        return self.whites[label][1]

    def siblings(self, label: int) -> tuple:
        """Labels of whites at the same black vertex, in planar order."""
        b = self.blacks[self.parent_black(label)][0]
        return tuple(w.label for w in b.whites)

    def parent_white(self, label: int):
        """Label of the white vertex directly below the parent black of
        ``label`` (None at the root)."""
        return self.blacks[self.parent_black(label)][1]

    def black_paths(self) -> list:
        return sorted(self.blacks)

    def black_children(self, label: int) -> list:
        """Paths of black vertices directly above the white ``label``."""
        path, pos = self.whites[label][1], self.whites[label][2]
        return [path + ((pos, q),) for q in range(self.white(label).arity)]

    @property
    def dimension(self) -> int:
        if self._dim is None:
            self._dim = sum(w.arity for w, _, _ in self.whites.values())
        return self._dim

    def arities(self) -> dict:
        return {lab: w.arity for lab, (w, _, _) in self.whites.items()}

    def root_paths(self) -> list:
        """White label sequences along every root-to-leaf path."""
        out = []

        def walk_white(w, acc):
            acc = acc + (w.label,)
            if not w.blacks:
                out.append(acc)
            for b in w.blacks:
                for ww in b.whites:
                    walk_white(ww, acc)

        for w in self.root.whites:
            walk_white(w, ())
        return out

    def relabel(self, mapping) -> "BwTree":
        """Apply ``mapping`` (dict or callable) to every white label."""
        f = mapping.get if isinstance(mapping, dict) else mapping

        def rb(b):
            return Black(tuple(rw(w) for w in b.whites))

        def rw(w):
            return White(f(w.label), tuple(rb(b) for b in w.blacks))

        return BwTree(rb(self.root))

    def act(self, sigma: Sequence[int]) -> "BwTree":
        """Right action: label l becomes sigma^{-1}(l)."""
        inv = invert(sigma)
        return self.relabel(lambda lab: inv[lab - 1])

    # JSON-ish flat form
    def to_flat(self) -> dict:
        children: list = []
        colors: list = []
        labels: dict = {}

        def add_black(b):
            vid = len(colors)
            colors.append("b")
            children.append([])
            for w in b.whites:
                children[vid].append(add_white(w))
            return vid

        def add_white(w):
            vid = len(colors)
            colors.append("w")
            children.append([])
            labels[w.label] = vid
            for b in w.blacks:
                children[vid].append(add_black(b))
            return vid

        add_black(self.root)
        return {
            "root": 0,
            "children": children,
            "colors": "".join(colors),
            "white_labels": [labels[i] for i in range(1, self.m + 1)],
        }

    @classmethod
    def from_flat(cls, data: dict) -> "BwTree":
        children = data["children"]
        colors = data["colors"]
        n = len(colors)
        if len(children) != n:
            raise TreeError("children and colors disagree in length")
        label_of = {v: i + 1 for i, v in enumerate(data["white_labels"])}
        seen = set()

        def build(v):
            if v in seen:
                raise TreeError("not a tree: vertex reached twice")
            seen.add(v)
            if colors[v] == "b":
                kids = [build(c) for c in children[v]]
                if not all(isinstance(k, White) for k in kids):
                    raise TreeError("edge joins two black vertices")
                return Black(tuple(kids))
            if colors[v] != "w":
                raise TreeError(f"bad color {colors[v]!r}")
            if v not in label_of:
                raise TreeError(f"white vertex {v} has no label")
            kids = [build(c) for c in children[v]]
            if not all(isinstance(k, Black) for k in kids):
                raise TreeError("edge joins two white vertices")
            return White(label_of[v], tuple(kids))

        root = build(data.get("root", 0))
        if not isinstance(root, Black):
            raise TreeError("root must be black")
        if len(seen) != n:
            raise TreeError("not connected")
        return cls(root)


def _iter_whites(b: Black) -> Iterator[White]:
    for w in b.whites:
        yield w
        for bb in w.blacks:
            yield from _iter_whites(bb)


def _validate(b: Black, is_root: bool):
    if not is_root and not b.whites:
        raise TreeError("non-root black vertex is univalent")
    for w in b.whites:
        for bb in w.blacks:
            _validate(bb, False)


def invert(sigma: Sequence[int]) -> tuple:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s - 1] = i + 1
    return tuple(inv)


def compose_perm(sigma: Sequence[int], tau: Sequence[int]) -> tuple:
    """(sigma tau)(x) = sigma(tau(x))."""
    return tuple(sigma[t - 1] for t in tau)


def corolla(labels: Sequence[int]) -> BwTree:
    return BwTree(Black(tuple(White(lab) for lab in labels)))


# ---------------------------------------------------------------- enumeration


@lru_cache(maxsize=None)
def _white_shapes(k: int) -> tuple:
    """Unlabelled planar white subtrees with k white vertices (labels 0)."""
    out = []
    for blacks in _black_seqs(k - 1):
        out.append(White(0, blacks))
    return tuple(out)


@lru_cache(maxsize=None)
def _black_shapes(k: int) -> tuple:
    """Non-root black subtrees (at least one white child) with k whites."""
    return tuple(Black(ws) for ws in _white_seqs(k) if ws)


@lru_cache(maxsize=None)
def _white_seqs(k: int) -> tuple:
    if k == 0:
        return ((),)
    out = []
    for first in range(1, k + 1):
        for w in _white_shapes(first):
            for rest in _white_seqs(k - first):
                out.append((w,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _black_seqs(k: int) -> tuple:
    if k == 0:
        return ((),)
    out = []
    for first in range(1, k + 1):
        for b in _black_shapes(first):
            for rest in _black_seqs(k - first):
                out.append((b,) + rest)
    return tuple(out)


def _label_shape(root: Black, labels: Iterator[int]) -> Black:
    def lb(b):
        return Black(tuple(lw(w) for w in b.whites))

    def lw(w):
        lab = next(labels)
        return White(lab, tuple(lb(b) for b in w.blacks))

    return lb(root)


@lru_cache(maxsize=None)
def _enumerate(m: int) -> tuple:
    # distinct labellings of a planar shape are distinct trees, and the key
    # and dimension depend only on the shape, so both are computed once
    out = []
    for ws in _white_seqs(m):
        if not ws:
            continue
        shape = Black(ws)
        tmpl = _ser_black(shape).replace("{", "{{").replace("}", "}}").replace("w0(", "w{}(")
        dim = sum(w.arity for w in _iter_whites(shape))
        for perm in itertools.permutations(range(1, m + 1)):
            out.append(BwTree._trusted(_label_shape(shape, iter(perm)), m, tmpl.format(*perm), dim))
    out.sort(key=lambda t: (t._dim, t._key))
    return tuple(out)


def enumerate_bw_trees(m: int, dim: int | None = None) -> list:
    """All b/w trees with m labelled whites, sorted by (dimension, key)."""
    if m < 1:
        raise TreeError("arity 0: cacti spaces are empty")
    trees = _enumerate(m)
    if dim is not None:
        return [t for t in trees if t.dimension == dim]
    return list(trees)


def shape_count(m: int) -> int:
    return sum(1 for ws in _white_seqs(m) if ws)


# ------------------------------------------------------------ angle collapse


def angle_collapse(T: BwTree, w: int, i: int) -> BwTree:
    """Glue the cyclically consecutive edges e_i, e_{i+1} at white ``w``.

    e_0 is the incoming edge.  i=0 merges the first black child into the
    parent black (its whites go just left of w); i=|w| merges the last one
    (its whites go just right of w); otherwise black children i and i+1
    merge.
    """
    node = T.white(w)
    k = node.arity
    if k == 0:
        raise TreeError(f"white {w} has no angles to collapse")
    if not 0 <= i <= k:
        raise TreeError(f"angle index {i} out of range 0..{k}")

    def rebuild_black(b: Black) -> Black:
        new = []
        for ww in b.whites:
            if ww.label == w:
                if i == 0:
                    new.extend(ww.blacks[0].whites)
                    new.append(White(w, ww.blacks[1:]))
                elif i == k:
                    new.append(White(w, ww.blacks[:-1]))
                    new.extend(ww.blacks[-1].whites)
                else:
                    merged = Black(ww.blacks[i - 1].whites + ww.blacks[i].whites)
                    new.append(
                        White(w, ww.blacks[: i - 1] + (merged,) + ww.blacks[i + 1 :])
                    )
            else:
                new.append(White(ww.label, tuple(rebuild_black(bb) for bb in ww.blacks)))
        return Black(tuple(new))

    return BwTree(rebuild_black(T.root))


def collapses(T: BwTree) -> list:
    """All (w, i, T') single angle collapses of T."""
    out = []
    for lab in range(1, T.m + 1):
        k = T.white(lab).arity
        for i in range(k + 1) if k else ():
            out.append((lab, i, angle_collapse(T, lab, i)))
    return out


def below(T_small: BwTree, T_big: BwTree) -> bool:
    """T_small ≺ T_big (reflexive): reachable by iterated collapses."""
    if T_small.dimension > T_big.dimension:
        return False
    frontier = {T_big}
    while frontier:
        if T_small in frontier:
            return True
        nxt = set()
        for t in frontier:
            if t.dimension > T_small.dimension:
                nxt.update(c for _, _, c in collapses(t))
        frontier = nxt
    return False


# -------------------------------------------------------------- statistics


def is_compatible(T: BwTree, sigma: Sequence[int]) -> bool:
    pos = {lab: h for h, lab in enumerate(sigma)}
    for path in T.root_paths():
        hs = [pos[lab] for lab in path]
        if any(a >= b for a, b in zip(hs, hs[1:])):
            return False
    return True


def compatible_permutations(T: BwTree) -> list:
    return [s for s in itertools.permutations(range(1, T.m + 1)) if is_compatible(T, s)]


def alpha_white(T: BwTree, label: int) -> int:
    return 1 + sum(alpha_black(T, p) for p in T.black_children(label))


def alpha_black(T: BwTree, path: BlackPath) -> int:
    b = T.blacks[path][0]
    return sum(1 + _count_above(w) for w in b.whites)


def _count_above(w: White) -> int:
    return sum(1 + _count_above(ww) for b in w.blacks for ww in b.whites)


@dataclass(frozen=True)
class Stats:
    alpha: int
    lam: tuple = ()
    rho: tuple = ()
    lam_plus: tuple | None = None
    rho_plus: tuple | None = None


def tree_stats(T: BwTree, v, sigma: Sequence[int] | None = None) -> Stats:
    """alpha, lambda, rho and (given sigma) lambda+, rho+ at a vertex.

    ``v`` is a white label (int) or a black path (tuple).  The neighbour
    sets list siblings nearest first.
    """
    if isinstance(v, tuple):
        return Stats(alpha_black(T, v))
    if sigma is not None and not is_compatible(T, sigma):
        raise CompatibilityError(f"{sigma} is not compatible with {T.key()}")
    sib = T.siblings(v)
    pos = sib.index(v)
    lam = tuple(reversed(sib[:pos]))
    rho = sib[pos + 1 :]
    if sigma is None:
        return Stats(alpha_white(T, v), lam, rho)
    h = {lab: k for k, lab in enumerate(sigma)}

    def plus(side):
        out = []
        for w in side:
            if h[w] > h[v]:
                out.append(w)
            else:
                break
        return tuple(out)

    return Stats(alpha_white(T, v), lam, rho, plus(lam), plus(rho))


def linear_extensions(m: int, order: frozenset) -> list:
    """Total orders sigma (height -> label) where (i, j) in order puts i
    below j.  Lexicographic order of the tuples."""
    out = []
    for perm in itertools.permutations(range(1, m + 1)):
        h = {lab: k for k, lab in enumerate(perm)}
        if all(h[i] < h[j] for i, j in order):
            out.append(perm)
    return out


# ---------------------------------------------------------- Upsilon trees


@dataclass(frozen=True)
class UNode:
    """Internal vertex of an Upsilon tree; children are UNode or Leaf."""

    label: int
    children: tuple = ()


@dataclass(frozen=True)
class Leaf:
    index: int


def upsilon_leaves(node) -> list:
    if isinstance(node, Leaf):
        return [node.index]
    out = []
    for c in node.children:
        out.extend(upsilon_leaves(c))
    return out


def upsilon_labels(node) -> list:
    if isinstance(node, Leaf):
        return []
    out = [node.label]
    for c in node.children:
        out.extend(upsilon_labels(c))
    return out


def upsilon_str(node) -> str:
    if isinstance(node, Leaf):
        return f"t{node.index}"
    return f"{node.label}[" + " ".join(upsilon_str(c) for c in node.children) + "]"
