"""
Combinatorial crystals B(inf), B(lambda, inf), B(lambda) and their tensor products.

B(inf) is modelled by the Kashiwara embedding: a node is a finitely supported
sequence a = (a_1, a_2, ...) standing for

    u_inf (x) b_{i_K}(-a_K) (x) ... (x) b_{i_1}(-a_1)

with i_k the periodic repetition of the vertex order.  The five maps are
obtained by folding the two-factor tensor rule over this product.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .rootdata import is_dominant

NEG_INF = float("-inf")


class CrystalError(ValueError):
    pass


@dataclass(frozen=True)
class CrystalFactor:
    kind: str   # "inf" for B(lambda, inf), "fin" for B(lambda)
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(int(c) for c in self.lam))
        if self.kind not in ("inf", "fin"):
            raise CrystalError(f"unknown crystal kind {self.kind!r}")
        if self.kind == "fin" and not is_dominant(self.lam):
            raise CrystalError(f"B({self.lam}) needs a dominant weight")

    def label(self):
        lam = ",".join(map(str, self.lam))
        return f"B({lam},inf)" if self.kind == "inf" else f"B({lam})"


def B(lam):
    return CrystalFactor("fin", lam)


def Binf(lam):
    return CrystalFactor("inf", lam)


@dataclass(frozen=True)
class CrystalDescriptor:
    factors: tuple
    depth: int

    def label(self):
        return " (x) ".join(f.label() for f in self.factors)


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def combine(d1, d2):
    """The two-factor rule on (eps, phi, wt_i) triples."""
    e1, p1, w1 = d1
    e2, p2, w2 = d2
    return (max(e1, e2 - w1), max(p1 + w2, p2), w1 + w2)


class KashiwaraModel:
    """B(inf) for one datum."""

    def __init__(self, datum):
        self.datum = datum
        self.n = datum.rank
        self.C = datum.cartan
        self._data = lru_cache(maxsize=None)(self._data_uncached)

    def index(self, k):
        """i_k for k = 1, 2, ..."""
        return (k - 1) % self.n

    def degree(self, a):
        nu = [0] * self.n
        for k, c in enumerate(a, 1):
            nu[self.index(k)] += c
        return tuple(nu)

    def wt_pairing(self, nu, i):
        return -sum(self.C[i][j] * nu[j] for j in range(self.n))

    def _factor(self, i, k, c):
        j = self.index(k)
        if j == i:
            return (c, -c, -2 * c)
        return (NEG_INF, NEG_INF, -c * self.C[i][j])

    def _fold(self, a, i, window):
        """Prefix data from u_inf rightwards; entry m covers u and factors K..K-m+1."""
        prefix = [(0, 0, 0)]
        padded = list(a) + [0] * (window - len(a))
        for k in range(window, 0, -1):
            prefix.append(combine(prefix[-1], self._factor(i, k, padded[k - 1])))
        return padded, prefix

    def _data_uncached(self, a, i, window=None):
        window = window or len(a) + self.n
        padded, prefix = self._fold(a, i, window)
        return prefix[-1][0], prefix[-1][1]

    def eps(self, a, i):
        return self._data(a, i)[0]

    def phi(self, a, i):
        return self._data(a, i)[1]

    def data_in_window(self, a, i, window):
        return self._data_uncached(a, i, window)

    def _locate(self, a, i, window, strict):
        padded, prefix = self._fold(a, i, window)
        # walk from the rightmost factor b_{i_1} leftwards
        for k in range(1, window + 1):
            left = prefix[window - k]
            right = self._factor(i, k, padded[k - 1])
            moves_left = left[1] > right[0] if strict else left[1] >= right[0]
            if not moves_left:
                return padded, k
        return padded, None

    def f(self, a, i):
        window = len(a) + self.n
        while True:
            padded, k = self._locate(a, i, window, strict=True)
            if k is not None:
                padded[k - 1] += 1
                return _trim(padded)
            window += self.n

    def e(self, a, i):
        padded, k = self._locate(a, i, len(a) + self.n, strict=False)
        if k is None:
            return None
        if padded[k - 1] <= 0:
            raise CrystalError(f"node {a} is outside the image of B(inf)")
        padded[k - 1] -= 1
        return _trim(padded)


class Crystals:
    """Crystal operations for one datum."""

    def __init__(self, datum):
        self.datum = datum
        self.model = KashiwaraModel(datum)
        self.n = datum.rank
        self.C = datum.cartan
        self._finite_sets = {}

    # single factors

    def highest(self, desc):
        return tuple(() for _ in desc.factors)

    def base_degree(self, a):
        return self.model.degree(a)

    def base_wt(self, factor, a):
        nu = self.model.degree(a)
        return tuple(factor.lam[i] + self.model.wt_pairing(nu, i) for i in range(self.n))

    def base_ops(self, factor, a, i):
        """(eps_i, phi_i, wt, f_i a, e_i a); None marks zero."""
        eps = self.model.eps(a, i)
        wt = self.base_wt(factor, a)
        phi = eps + wt[i]
        fa = self.model.f(a, i)
        if factor.kind == "fin" and phi <= 0:
            fa = None
        return eps, phi, wt, fa, self.model.e(a, i)

    # tensors

    def wt(self, desc, node):
        out = [0] * self.n
        for f, a in zip(desc.factors, node):
            for i, c in enumerate(self.base_wt(f, a)):
                out[i] += c
        return tuple(out)

    def degree(self, node):
        out = [0] * self.n
        for a in node:
            for i, c in enumerate(self.model.degree(a)):
                out[i] += c
        return tuple(out)

    def _factor_data(self, desc, node, i):
        out = []
        for f, a in zip(desc.factors, node):
            eps = self.model.eps(a, i)
            w = self.base_wt(f, a)[i]
            out.append((eps, eps + w, w))
        return out

    def eps(self, desc, node, i):
        return self.tensor_data(desc, node, i)[0]

    def phi(self, desc, node, i):
        return self.tensor_data(desc, node, i)[1]

    def tensor_data(self, desc, node, i):
        data = self._factor_data(desc, node, i)
        acc = data[0]
        for d in data[1:]:
            acc = combine(acc, d)
        return acc

    def _choose(self, desc, node, i, strict):
        data = self._factor_data(desc, node, i)
        prefix = [data[0]]
        for d in data[1:]:
            prefix.append(combine(prefix[-1], d))
        m = len(data) - 1
        while m > 0:
            left = prefix[m - 1]
            goes_left = left[1] > data[m][0] if strict else left[1] >= data[m][0]
            if not goes_left:
                return m
            m -= 1
        return 0

    def f(self, desc, node, i):
        m = self._choose(desc, node, i, strict=True)
        _, _, _, fa, _ = self.base_ops(desc.factors[m], node[m], i)
        if fa is None:
            return None
        return node[:m] + (fa,) + node[m + 1:]

    def e(self, desc, node, i):
        m = self._choose(desc, node, i, strict=False)
        ea = self.model.e(node[m], i)
        if ea is None:
            return None
        return node[:m] + (ea,) + node[m + 1:]

    def tensor_ops(self, desc, node, i):
        eps, phi, _ = self.tensor_data(desc, node, i)
        return eps, phi, self.wt(desc, node), self.f(desc, node, i), self.e(desc, node, i)

    # generation

    def _closure(self, factor, depth):
        key = (factor, depth)
        got = self._finite_sets.get(key)
        if got is not None:
            return got
        desc = CrystalDescriptor((factor,), depth)
        seen = {()}
        frontier = [()]
        for _ in range(depth):
            nxt = []
            for a in frontier:
                for i in range(self.n):
                    b = self.f(desc, (a,), i)
                    if b is not None and b[0] not in seen:
                        seen.add(b[0])
                        nxt.append(b[0])
            frontier = nxt
        self._finite_sets[key] = seen
        return seen

    def generate(self, desc):
        """Nodes up to the depth cutoff grouped by degree, with the f-edges."""
        per_factor = [sorted(self._closure(f, desc.depth), key=self._sort_key_base)
                      for f in desc.factors]
        nodes = [()]
        for level in per_factor:
            nxt = []
            for node in nodes:
                used = sum(sum(self.model.degree(a)) for a in node)
                for a in level:
                    if used + sum(self.model.degree(a)) <= desc.depth:
                        nxt.append(node + (a,))
            nodes = nxt
        node_set = set(nodes)
        edges = []
        for node in nodes:
            for i in range(self.n):
                b = self.f(desc, node, i)
                if b is not None and b in node_set:
                    edges.append((node, i, b))
        return GeneratedCrystal(self, desc, sorted(nodes, key=self.sort_key), edges)

    def _sort_key_base(self, a):
        nu = self.model.degree(a)
        return (sum(nu), nu, a)

    def sort_key(self, node):
        nu = self.degree(node)
        return (sum(nu), nu, node)

    # checks

    def check_axioms(self, gen):
        """Exhaustive check of C1-C4 on every node and vertex; returns failures."""
        desc = gen.desc
        nodes = set(gen.nodes)
        bad = []
        for node in gen.nodes:
            for i in range(self.n):
                eps, phi, wt, fb, eb = self.tensor_ops(desc, node, i)
                if phi != eps + wt[i]:
                    bad.append(("C1", node, i))
                if eb is not None:
                    e2, p2, w2, _, _ = self.tensor_ops(desc, eb, i)
                    if w2 != tuple(w + self.C[i][j] for j, w in enumerate(wt)) or \
                            e2 != eps - 1 or p2 != phi + 1:
                        bad.append(("C2", node, i))
                    if self.f(desc, eb, i) != node:
                        bad.append(("C3", node, i))
                if fb is not None:
                    e2, p2, w2, _, _ = self.tensor_ops(desc, fb, i)
                    if w2 != tuple(w - self.C[i][j] for j, w in enumerate(wt)) or \
                            e2 != eps + 1 or p2 != phi - 1:
                        bad.append(("C2'", node, i))
                    if fb in nodes and self.e(desc, fb, i) != node:
                        bad.append(("C3", node, i))
                if phi == NEG_INF and (eb is not None or fb is not None):
                    bad.append(("C4", node, i))
        return bad

    def window_independent(self, a, extra_periods=2):
        base = [self.model.data_in_window(a, i, len(a) + self.n) for i in range(self.n)]
        for p in range(1, extra_periods + 1):
            w = len(a) + self.n * (p + 1)
            if [self.model.data_in_window(a, i, w) for i in range(self.n)] != base:
                return False
        return True

    def in_finite(self, factor, a, depth):
        return a in self._closure(CrystalFactor("fin", factor.lam), depth)

    def localization_morphism(self, desc):
        """The map with last factor B(lambda, inf) -> B(lambda); returns (target desc, map)."""
        last = desc.factors[-1]
        if last.kind != "inf":
            raise CrystalError("last factor must be a Verma crystal")
        target = CrystalDescriptor(desc.factors[:-1] + (B(last.lam),), desc.depth)

        def psi(node):
            if node is None or not self.in_finite(last, node[-1], desc.depth):
                return None
            return node

        return target, psi

    def check_morphism(self, gen, target, psi):
        """Morphism conditions on every generated node; returns failures."""
        bad = []
        src = gen.desc
        for node in gen.nodes:
            img = psi(node)
            if img is None:
                continue
            if self.wt(target, img) != self.wt(src, node):
                bad.append(("wt", node))
            for i in range(self.n):
                if self.tensor_data(target, img, i)[:2] != self.tensor_data(src, node, i)[:2]:
                    bad.append(("eps/phi", node, i))
                fb = self.f(src, node, i)
                if fb is not None and sum(self.degree(fb)) <= src.depth:
                    fimg = psi(fb)
                    if fimg is not None and self.f(target, img, i) != fimg:
                        bad.append(("f", node, i))
        return bad

    def counts_by_degree(self, gen):
        out = {}
        for node in gen.nodes:
            nu = self.degree(node)
            out[nu] = out.get(nu, 0) + 1
        return out


class GeneratedCrystal:
    def __init__(self, crystals, desc, nodes, edges):
        self.crystals = crystals
        self.desc = desc
        self.nodes = nodes
        self.edges = edges

    def by_degree(self):
        out = {}
        for node in self.nodes:
            out.setdefault(self.crystals.degree(node), []).append(node)
        return out

    def _ids(self):
        return {node: k for k, node in enumerate(self.nodes)}

    def _node_text(self, node):
        return " (x) ".join("(" + ",".join(map(str, a)) + ")" for a in node)

    def export_dot(self):
        cr = self.crystals
        names = cr.datum.vertices
        ids = self._ids()
        lines = ["digraph crystal {", f'  label="{self.desc.label()}";']
        for node in self.nodes:
            wt = ",".join(map(str, cr.wt(self.desc, node)))
            lines.append(f'  n{ids[node]} [label="wt=({wt}) {self._node_text(node)}"];')
        for src, i, dst in self.edges:
            lines.append(f'  n{ids[src]} -> n{ids[dst]} [label="f{names[i]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def export_json(self):
        cr = self.crystals
        ids = self._ids()
        groups = []
        for nu, nodes in sorted(self.by_degree().items(), key=lambda t: (sum(t[0]), t[0])):
            groups.append({
                "degree": list(nu),
                "weight": list(cr.wt(self.desc, nodes[0])),
                "nodes": [{"id": ids[n], "seq": [list(a) for a in n]} for n in nodes],
            })
        edges = [{"from": ids[s], "to": ids[d], "vertex": cr.datum.vertices[i]}
                 for s, i, d in self.edges]
        doc = {"crystal": self.desc.label(), "depth": self.desc.depth,
               "weights": groups, "edges": edges}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def component_count(crystals, mods, blocks, nu):
    """(crystal count, formula count) for B(l^1) (x) ... (x) B(l^{N-1}) (x) B(l^N, inf)."""
    from .rootdata import splits
    lams = [tuple(d) for d in blocks]
    factors = tuple(B(l) for l in lams[:-1]) + (Binf(lams[-1]),)
    desc = CrystalDescriptor(factors, sum(nu))
    gen = crystals.generate(desc)
    crystal = crystals.counts_by_degree(gen).get(tuple(nu), 0)
    formula = 0
    for parts in splits(tuple(nu), len(lams)):
        term = mods.U.dim(parts[-1])
        for lam, p in zip(lams[:-1], parts[:-1]):
            term *= mods.v_dim(lam, p)
        formula += term
    return crystal, formula
