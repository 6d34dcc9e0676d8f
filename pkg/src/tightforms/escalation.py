"""Escalation search for tight T(n)-universal Gram lattices.

Starting from <n>, a lattice is repeatedly extended by a vector whose norm is
its truant.  Inner products with the current basis range over the full
Cauchy-Schwarz box; extensions that are degenerate or represent an integer
below n are dropped at every rank, and survivors are merged up to isometry.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, _kernels
from .certificates import BOUNDED_VERIFIED, TightCertificate
from .errors import NoTruant
from .forms import DEFAULT_BUDGET, GramForm, TruantResult, reduce_gram, truant, value_mask
from .isometry import IsometryClasses

CHECKPOINT_SCHEMA = 1


@dataclass
class EscalationNode:
    form: GramForm
    truant: TruantResult
    depth: int
    parent: Optional["EscalationNode"] = field(default=None, repr=False)


def root_node(n: int, cap: int) -> EscalationNode:
    G = GramForm([[n]])
    return EscalationNode(G, truant(G, n, cap), 1)


def _beta_box(G: GramForm, t: int) -> np.ndarray:
    widths = [math.isqrt(G.entries[i][i] * t) for i in range(G.dim)]
    rows = []
    for beta in itertools.product(*(range(-w, w + 1) for w in widths)):
        # b and -b give the same lattice; keep the first nonzero entry positive
        first = next((b for b in beta if b), 0)
        if first >= 0:
            rows.append(beta)
    return np.array(rows, dtype=np.int64).reshape(len(rows), G.dim)


def extension_candidates(G: GramForm, t: int, n: int, budget: Optional[int] = None) -> list[GramForm]:
    """Positive definite extensions of G by a norm-t vector with minimum >= n."""
    budget = DEFAULT_BUDGET if budget is None else budget
    betas = _beta_box(G, t)
    keep = np.zeros(len(betas), dtype=np.bool_)
    _kernels.screen_extensions(G.matrix, t, n, betas, keep, budget)
    k = G.dim
    out = []
    for beta in betas[keep]:
        rows = [list(G.entries[i]) + [int(beta[i])] for i in range(k)]
        rows.append([int(b) for b in beta] + [t])
        out.append(GramForm(rows, check=False))
    return out


def escalate_once(node: EscalationNode, n: int, *, T: int = 32,
                  budget: int = DEFAULT_BUDGET) -> list[GramForm]:
    """Children of one node, one representative per isometry class."""
    t = node.truant.truant
    if t is None:
        raise NoTruant(f"{node.form} represents everything up to {node.truant.cap}")
    classes = IsometryClasses(T)
    for child in extension_candidates(node.form, t, n, budget):
        classes.add(child)
    return classes.representatives()


@dataclass
class EscalationResult:
    n: int
    target_rank: int
    verify_bound: int
    ranks: dict[int, list[EscalationNode]]
    certificates: list[TightCertificate]

    def leaves(self) -> list[EscalationNode]:
        return self.ranks.get(self.target_rank, [])

    def failing_truants(self) -> list[int]:
        return [nd.truant.truant for nd in self.leaves() if nd.truant.truant is not None]


def _key_T(n: int, T: Optional[int]) -> int:
    return T if T is not None else max(32, 2 * n)


def _checkpoint_path(directory, n, rank, verify_bound) -> Path:
    return Path(directory) / f"escalation_n{n}_r{rank}_b{verify_bound}.jsonl"


def write_checkpoint(path, n: int, rank: int, verify_bound: int, nodes: list[EscalationNode], T: int):
    path = Path(path)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        header = {"schema": CHECKPOINT_SCHEMA, "kind": "escalation-checkpoint", "version": __version__,
                  "n": n, "rank": rank, "verify_bound": verify_bound, "key_T": T, "count": len(nodes)}
        fh.write(json.dumps(header) + "\n")
        for nd in nodes:
            rec = {"rank": nd.form.dim, "n": n, "gram": nd.form.row_major(),
                   "truant": nd.truant.truant}
            fh.write(json.dumps(rec) + "\n")
    os.replace(tmp, path)


def read_checkpoint(path, n: int, rank: int, verify_bound: int) -> Optional[list[EscalationNode]]:
    """Nodes stored at ``path``, or None if absent or written for other parameters."""
    path = Path(path)
    if not path.exists():
        return None
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        return None
    header = json.loads(lines[0])
    if (header.get("schema") != CHECKPOINT_SCHEMA or header.get("version") != __version__
            or header.get("n") != n or header.get("rank") != rank
            or header.get("verify_bound") != verify_bound or header.get("count") != len(lines) - 1):
        return None
    nodes = []
    for line in lines[1:]:
        rec = json.loads(line)
        k = rec["rank"]
        g = rec["gram"]
        G = GramForm([g[i * k:(i + 1) * k] for i in range(k)], check=False)
        nodes.append(EscalationNode(G, TruantResult(n, verify_bound, rec["truant"]), k))
    return nodes


def _merge_classes(parents, batches, n, verify_bound, T, budget, progress, rank):
    classes = IsometryClasses(T)
    parent_of = {}
    for nd, batch in zip(parents, batches):
        for child in batch:
            rep, new = classes.add(child)
            if new:
                parent_of[rep] = nd
        if progress:
            progress(rank, len(classes))
    return [EscalationNode(G, truant(G, n, verify_bound, budget=budget), rank, parent_of[G])
            for G in classes.representatives()]


def _final_rank(parents, batches, n, verify_bound, T, budget, progress, rank):
    # Leaves are tested before isometry merging: truants are invariants, so
    # only the tight survivors need to be merged into classes.
    parent_of = {}
    for nd, batch in zip(parents, batches):
        for child in batch:
            parent_of.setdefault(reduce_gram(child), nd)
        if progress:
            progress(rank, len(parent_of))
    failing, classes = [], IsometryClasses(T)
    for G, nd in parent_of.items():
        tr = truant(G, n, verify_bound, budget=budget)
        if tr.truant is None:
            classes.add(G)
        else:
            failing.append(EscalationNode(G, tr, rank, nd))
    tight = [EscalationNode(G, TruantResult(n, verify_bound, None), rank, parent_of.get(G))
             for G in classes.representatives()]
    failing.sort(key=lambda nd: nd.form.entries)
    return tight + failing


def escalation_search(n: int, target_rank: int = 4, verify_bound: int = 10**4, *,
                      checkpoint_dir=None, T: Optional[int] = None, threads: int = 1,
                      budget: Optional[int] = None, progress=None,
                      overlattices: bool = False) -> EscalationResult:
    """Escalate from <n> to ``target_rank`` and certify the tight leaves.

    Intermediate ranks are merged up to isometry across all parents; at the
    target rank only the tight leaves are, the others are kept up to exact
    equality of their reduced Gram matrices.  With
    ``checkpoint_dir`` each completed rank is written to disk and reused on
    the next run with the same parameters.  ``overlattices`` adds the tight
    classes that only occur as integral overlattices of leaves.
    """
    if target_rank < 1:
        raise ValueError("target_rank must be positive")
    budget = DEFAULT_BUDGET if budget is None else budget
    T = _key_T(n, T)
    ranks: dict[int, list[EscalationNode]] = {1: [root_node(n, verify_bound)]}
    for rank in range(2, target_rank + 1):
        cached = None
        if checkpoint_dir is not None:
            cached = read_checkpoint(_checkpoint_path(checkpoint_dir, n, rank, verify_bound),
                                     n, rank, verify_bound)
        if cached is not None:
            ranks[rank] = cached
            continue
        parents = [nd for nd in ranks[rank - 1] if nd.truant.truant is not None]

        def expand(nd):
            return extension_candidates(nd.form, nd.truant.truant, n, budget)

        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                batches = list(pool.map(expand, parents))
        else:
            batches = map(expand, parents)
        if rank < target_rank:
            nodes = _merge_classes(parents, batches, n, verify_bound, T, budget, progress, rank)
        else:
            nodes = _final_rank(parents, batches, n, verify_bound, T, budget, progress, rank)
        ranks[rank] = nodes
        if checkpoint_dir is not None:
            Path(checkpoint_dir).mkdir(parents=True, exist_ok=True)
            write_checkpoint(_checkpoint_path(checkpoint_dir, n, rank, verify_bound),
                             n, rank, verify_bound, nodes, T)
    certs = [TightCertificate(n, nd.form, verify_bound, BOUNDED_VERIFIED)
             for nd in ranks.get(target_rank, []) if nd.truant.truant is None]
    res = EscalationResult(n, target_rank, verify_bound, ranks, certs)
    if overlattices:
        res.certificates = overlattice_closure(res)
    return res


def _prime_square_divisors(d: int) -> list[int]:
    out, p = [], 2
    while p * p <= d:
        if d % (p * p) == 0:
            out.append(p)
        while d % p == 0:
            d //= p
        p += 1
    return out


def index_p_overlattices(G: GramForm, p: int) -> list[GramForm]:
    """Integral lattices containing G with index p.

    Each one is G + Z(x/p) for a nonzero x mod p with Ax = 0 (mod p) and
    x^T A x = 0 (mod p^2); x is scaled so its first nonzero entry is 1.
    """
    A = G.entries
    k = G.dim
    out = []
    for x in itertools.product(range(p), repeat=k):
        i = next((j for j, v in enumerate(x) if v), None)
        if i is None or x[i] != 1:
            continue
        Ax = [sum(A[r][c] * x[c] for c in range(k)) for r in range(k)]
        if any(v % p for v in Ax):
            continue
        q = sum(x[r] * Ax[r] for r in range(k))
        if q % (p * p):
            continue
        keep = [j for j in range(k) if j != i]
        rows = [[A[r][c] for c in keep] + [Ax[r] // p] for r in keep]
        rows.append([Ax[c] // p for c in keep] + [q // (p * p)])
        out.append(GramForm(rows, check=False))
    return out


def integral_overlattices(G: GramForm) -> list[GramForm]:
    """All integral lattices containing G with finite index, G included, up to isometry."""
    classes = IsometryClasses()
    todo = [G]
    classes.add(G)
    while todo:
        H = todo.pop()
        for p in _prime_square_divisors(H.det):
            for K in index_p_overlattices(H, p):
                rep, new = classes.add(K)
                if new:
                    todo.append(rep)
    return classes.representatives()


def overlattice_closure(result: EscalationResult) -> list[TightCertificate]:
    """Tight classes among the integral overlattices of the target-rank leaves.

    Any tight lattice contains a leaf of finite index, so this lists every
    tight class of the target rank, not only those reached as leaves.
    """
    n, bound = result.n, result.verify_bound
    classes = IsometryClasses(_key_T(n, None))
    for nd in result.leaves():
        for K in integral_overlattices(nd.form):
            classes.add(K)
    certs = []
    for G in classes.representatives():
        # an overlattice may pick up values below n
        if value_mask(G, n - 1)[1:].any() if n > 1 else False:
            continue
        if truant(G, n, bound).truant is None:
            certs.append(TightCertificate(n, G, bound, BOUNDED_VERIFIED))
    return certs


def quaternary_census(n: int, verify_bound: int = 10**4, **kw):
    """(m1, m2, classes) for rank-4 escalation leaves with base n.

    m2 counts the leaves representing [n, verify_bound]; m1 is the largest
    truant among the other leaves, so a leaf representing [n, m1] already
    represents [n, verify_bound].
    """
    res = escalation_search(n, 4, verify_bound, **kw)
    fails = res.failing_truants()
    m1 = max(fails) if fails else n
    classes = [c.form for c in res.certificates]
    return m1, len(classes), classes
