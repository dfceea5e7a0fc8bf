"""k-ary cardinal trees in level order, stored as the pair set
{<x, j> : node x has a child labelled j}.

With level-order numbering the child reached from x by label j is node
rank(<x, j>) + 2 - 1 = rank + 1, and the parent of node i is the first
coordinate of the i-th smallest pair.
"""
from __future__ import annotations

import numpy as np

from .bitcore import ktree_bound
from .errors import InputError
from .multidict import PairDict


class CardinalTree:
    KIND = "ktree"

    def __init__(self, n: int, k: int, pd: PairDict | None):
        self.n, self.k, self.pd = n, k, pd

    @classmethod
    def build(cls, n: int, k: int, edges, seed: int = 0):
        """edges[i-1] = (parent, label) of node i, for i = 1 .. n-1."""
        if n < 1:
            raise InputError("a tree has at least one node")
        if k < 1:
            raise InputError("arity must be at least 1")
        edges = list(edges)
        if len(edges) != n - 1:
            raise InputError(f"expected {n - 1} edges, got {len(edges)}")
        par = np.array([int(p) for p, _ in edges], dtype=np.int64)
        lab = np.array([int(j) for _, j in edges], dtype=np.int64)
        if n > 1:
            if lab.min() < 0 or lab.max() >= k:
                bad = int(np.flatnonzero((lab < 0) | (lab >= k))[0]) + 1
                raise InputError(f"node {bad}: label outside [0, {k})")
            if np.any(par < 0) or np.any(par >= np.arange(1, n)):
                bad = int(np.flatnonzero((par < 0) | (par >= np.arange(1, n)))[0]) + 1
                raise InputError(f"node {bad}: parent must precede the node")
            dp, dl = np.diff(par), np.diff(lab)
            bad = np.flatnonzero((dp < 0) | ((dp == 0) & (dl <= 0)))
            if len(bad):
                i = int(bad[0]) + 2
                raise InputError(f"node {i}: edges are not in level order "
                                 "(or a label repeats at one node)")
        if n == 1:
            return cls(1, k, None)
        return cls(n, k, PairDict.from_pairs(par, lab, n, k, seed=seed))

    @classmethod
    def from_parents(cls, parents, labels, k: int, **kw):
        return cls.build(len(parents) + 1, k, zip(parents, labels), **kw)

    def _node(self, x: int):
        if not 0 <= x < self.n:
            raise InputError(f"node {x} out of range [0, {self.n})")

    def _label(self, j: int):
        if not 0 <= j < self.k:
            raise InputError(f"label {j} out of range [0, {self.k})")

    def child_by_label(self, x: int, j: int):
        self._node(x)
        self._label(j)
        if self.pd is None:
            return None
        r = self.pd.global_rank(x, j)
        return None if r < 0 else r + 1

    def parent(self, i: int) -> int:
        if not 1 <= i < self.n:
            raise InputError(f"node {i} has no parent")
        return self.pd.first_of(i)

    def degree(self, x: int) -> int:
        self._node(x)
        return 0 if self.pd is None else self.pd.size(x)

    def ith_child(self, x: int, i: int) -> int:
        d = self.degree(x)
        if not 1 <= i <= d:
            raise InputError(f"child index {i} out of range [1, {d}]")
        return self.pd.boundary_rank(x) + i

    def ordinal_of_child(self, x: int, j: int) -> int:
        self._node(x)
        self._label(j)
        r = -1 if self.pd is None else self.pd.rank(x, j)
        if r < 0:
            raise InputError(f"node {x} has no child labelled {j}")
        return r + 1

    def edges(self):
        """(parent, label) of nodes 1 .. n-1, recovered by navigation."""
        out = []
        for x in range(self.n):
            for i in range(1, self.degree(x) + 1):
                out.append((x, self.pd.select(x, i)))
        return out

    # -- serialization
    def params(self):
        out = {"n": self.n, "k": self.k}
        if self.pd is not None:
            out.update({f"pd.{k}": v for k, v in self.pd.params().items()})
        return out

    def sections(self):
        if self.pd is None:
            return {}
        return {f"pd.{k}": v for k, v in self.pd.sections().items()}

    @classmethod
    def from_parts(cls, params, sections):
        if params["n"] == 1:
            return cls(1, params["k"], None)
        pp = {k[3:]: v for k, v in params.items() if k.startswith("pd.")}
        ps = {k[3:]: v for k, v in sections.items() if k.startswith("pd.")}
        return cls(params["n"], params["k"], PairDict.from_parts(pp, ps))

    def space(self) -> dict:
        if self.pd is None:
            return {}
        return {f"pd.{k}": v for k, v in self.pd.space().items()}

    def lower_bound(self) -> int:
        return ktree_bound(self.n, self.k)


def build_tree(n: int, k: int, edges, **kw) -> CardinalTree:
    return CardinalTree.build(n, k, edges, **kw)
