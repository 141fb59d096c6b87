"""Progressive-edge-growth Tanner graphs, alist I/O, and systematic encoding.

Each edge of a variable node is placed on the check node farthest away in a
BFS over the current graph (unreached checks count as infinitely far); ties
are broken by lowest current check degree, then lowest check priority.  With
seed 0 the priority order is plain index order; other seeds permute the
priorities so that retries produce structurally different graphs while the
tie-break rule itself stays fixed.

The shortest cycle created by each placement is ``distance + 1``, so the
construction tracks the exact girth as it goes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from rllsim.degree import DegreeDistribution, node_counts


class ConstructionError(ValueError):
    """Requested distribution cannot be realized for the given (n, rate)."""


class EncoderBuildError(ValueError):
    """Parity-check matrix rank too low to honor the design dimension."""


@njit(cache=True, nogil=True)
def _peg_core(var_deg, m, prio, chk_cap):
    n = var_deg.shape[0]
    max_vdeg = int(var_deg.max())
    var_adj = np.full((n, max_vdeg), -1, dtype=np.int32)
    chk_deg = np.zeros(m, dtype=np.int32)
    chk_adj = np.full((m, chk_cap), -1, dtype=np.int32)

    var_mark = np.full(n, -1, dtype=np.int64)
    chk_mark = np.full(m, -1, dtype=np.int64)
    chk_dist = np.zeros(m, dtype=np.int32)
    var_frontier = np.empty(n, dtype=np.int32)
    var_next = np.empty(n, dtype=np.int32)

    girth = np.int64(1 << 60)
    saturated_any = False
    stamp = np.int64(0)

    for v in range(n):
        for e in range(var_deg[v]):
            chosen = -1
            dist_chosen = -1
            if e == 0:
                # no edges yet: global min degree, min priority
                best_deg = 1 << 30
                best_prio = 1 << 30
                for c in range(m):
                    if chk_deg[c] < best_deg or (
                        chk_deg[c] == best_deg and prio[c] < best_prio
                    ):
                        best_deg = chk_deg[c]
                        best_prio = prio[c]
                        chosen = c
            else:
                stamp += 1
                var_mark[v] = stamp
                n_frontier = 1
                var_frontier[0] = v
                reached = 0
                depth = 0
                last_depth_with_new = -1
                while n_frontier > 0:
                    # variables at graph distance 2*depth; their checks are at
                    # 2*depth + 1
                    new_checks = 0
                    for fi in range(n_frontier):
                        vv = var_frontier[fi]
                        for k in range(var_deg[vv]):
                            c = var_adj[vv, k]
                            if c < 0:
                                break
                            if chk_mark[c] != stamp:
                                chk_mark[c] = stamp
                                chk_dist[c] = 2 * depth + 1
                                reached += 1
                                new_checks += 1
                    if new_checks > 0:
                        last_depth_with_new = depth
                    if reached == m:
                        break
                    # expand to variables at 2*depth + 2 through the newly
                    # reached checks
                    n_next = 0
                    for c in range(m):
                        if chk_mark[c] == stamp and chk_dist[c] == 2 * depth + 1:
                            for k in range(chk_deg[c]):
                                u = chk_adj[c, k]
                                if var_mark[u] != stamp:
                                    var_mark[u] = stamp
                                    var_next[n_next] = u
                                    n_next += 1
                    for i in range(n_next):
                        var_frontier[i] = var_next[i]
                    n_frontier = n_next
                    depth += 1

                if reached < m:
                    # unreached checks exist: no new cycle
                    best_deg = 1 << 30
                    best_prio = 1 << 30
                    for c in range(m):
                        if chk_mark[c] != stamp:
                            if chk_deg[c] < best_deg or (
                                chk_deg[c] == best_deg and prio[c] < best_prio
                            ):
                                best_deg = chk_deg[c]
                                best_prio = prio[c]
                                chosen = c
                else:
                    saturated_any = True
                    max_dist = 2 * last_depth_with_new + 1
                    if max_dist <= 1:
                        return var_adj, chk_deg, np.int64(-1), saturated_any, 1
                    best_deg = 1 << 30
                    best_prio = 1 << 30
                    for c in range(m):
                        if chk_mark[c] == stamp and chk_dist[c] == max_dist:
                            if chk_deg[c] < best_deg or (
                                chk_deg[c] == best_deg and prio[c] < best_prio
                            ):
                                best_deg = chk_deg[c]
                                best_prio = prio[c]
                                chosen = c
                    dist_chosen = max_dist

            var_adj[v, e] = chosen
            if chk_deg[chosen] >= chk_cap:
                return var_adj, chk_deg, np.int64(-1), saturated_any, 2
            chk_adj[chosen, chk_deg[chosen]] = v
            chk_deg[chosen] += 1
            if dist_chosen > 0 and dist_chosen + 1 < girth:
                girth = np.int64(dist_chosen + 1)

    return var_adj, chk_deg, girth, saturated_any, 0


@dataclass
class TannerGraph:
    """Bipartite code graph with exact per-variable degrees."""

    n_var: int
    n_chk: int
    var_deg: np.ndarray = field(repr=False)
    var_adj: np.ndarray = field(repr=False)  # (n_var, max_deg), -1 padded, sorted rows
    girth: int = 0
    saturated: bool = True  # False implies the graph is cycle-free

    @property
    def n_edges(self):
        return int(self.var_deg.sum())

    def adjacency(self, v):
        return self.var_adj[v, : self.var_deg[v]].tolist()

    def chk_degrees(self):
        counts = np.zeros(self.n_chk, dtype=np.int64)
        for v in range(self.n_var):
            for c in self.adjacency(v):
                counts[c] += 1
        return counts

    def measured_gamma(self):
        """Realized node-perspective check distribution as (degree, fraction)."""
        counts = self.chk_degrees()
        degs, freq = np.unique(counts, return_counts=True)
        return [(int(d), float(f) / self.n_chk) for d, f in zip(degs, freq)]

    def h_matrix(self):
        H = np.zeros((self.n_chk, self.n_var), dtype=np.uint8)
        for v in range(self.n_var):
            H[self.var_adj[v, : self.var_deg[v]], v] = 1
        return H

    def edge_layout(self):
        """Edges grouped contiguously by check: (edge_var, chk_ptr, var_of_edge_sorted_by_var...)

        Returns ``edge_var`` (E,) with edges ordered check-major, and
        ``chk_ptr`` (n_chk+1,) CSR offsets.  This is the decoder's layout.
        """
        counts = self.chk_degrees()
        chk_ptr = np.zeros(self.n_chk + 1, dtype=np.int64)
        np.cumsum(counts, out=chk_ptr[1:])
        edge_var = np.empty(self.n_edges, dtype=np.int64)
        fill = chk_ptr[:-1].copy()
        for v in range(self.n_var):
            for c in self.adjacency(v):
                edge_var[fill[c]] = v
                fill[c] += 1
        return edge_var, chk_ptr


def peg_construct(dist: DegreeDistribution, n: int, rate: float, seed: int) -> TannerGraph:
    """Build a Tanner graph realizing a node-perspective distribution.

    The check count comes from edge accounting against the distribution's
    check side: m = round(E / avg check degree).  Variable degrees are
    assigned in ascending blocks, so the low-degree (weakly protected) class
    occupies the low variable indices.
    """
    if dist.perspective != "node":
        raise ConstructionError("peg_construct expects a node-perspective distribution")
    if n * (1.0 - rate) < 1.0:
        raise ConstructionError(f"n={n}, rate={rate} leaves no parity checks")
    vd, vw = dist.var_arrays()
    if vd.min() < 2:
        raise ConstructionError("variable degrees below 2 are unsupported")
    counts = node_counts(vw, n)
    var_deg = np.repeat(vd, counts).astype(np.int32)
    if len(var_deg) != n:
        raise ConstructionError("node counts do not cover n")
    E = int(var_deg.sum())
    cd, cw = dist.chk_arrays()
    avg_chk = float(cd @ cw)
    m = int(round(E / avg_chk))
    if m < 1 or m > E:
        raise ConstructionError(f"implied check count {m} infeasible")
    realized_rate = 1.0 - m / n
    if abs(realized_rate - rate) > 0.05:
        raise ConstructionError(
            f"distribution implies rate {realized_rate:.4f}, requested {rate}"
        )
    if int(var_deg.max()) > m:
        raise ConstructionError("a variable degree exceeds the number of checks")

    rng = np.random.default_rng(seed)
    prio = np.arange(m, dtype=np.int32) if seed == 0 else rng.permutation(m).astype(np.int32)
    chk_cap = max(int(2 * np.ceil(E / m)) + 8, int(cd.max()) + 8)
    var_adj, chk_deg, girth, saturated, err = _peg_core(var_deg, m, prio, chk_cap)
    if err == 1:
        raise ConstructionError("all checks adjacent to a variable; parallel edge forced")
    if err == 2:
        raise ConstructionError("check degree capacity exceeded")
    if np.any(chk_deg < 1):
        raise ConstructionError("construction left an unused check node")
    var_adj = np.sort(
        np.where(var_adj < 0, np.iinfo(np.int32).max, var_adj), axis=1
    )
    var_adj[var_adj == np.iinfo(np.int32).max] = -1
    g = int(girth) if girth < (1 << 59) else 0  # 0: no cycle found (forest)
    return TannerGraph(
        n_var=n,
        n_chk=m,
        var_deg=var_deg.astype(np.int64),
        var_adj=var_adj.astype(np.int64),
        girth=g,
        saturated=bool(saturated),
    )


# ---------------------------------------------------------------------------
# systematic encoding


def _gf2_rref(H):
    """Reduced row echelon form over GF(2); returns (R, pivot_cols)."""
    H = H.copy()
    m, n = H.shape
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        hot = np.nonzero(H[r:, col])[0]
        if hot.size == 0:
            continue
        pr = r + int(hot[0])
        if pr != r:
            H[[r, pr]] = H[[pr, r]]
        others = np.nonzero(H[:, col])[0]
        others = others[others != r]
        if others.size:
            H[others] ^= H[r]
        pivots.append(col)
        r += 1
    return H[:r], np.array(pivots, dtype=np.int64)


@dataclass
class Encoder:
    """Systematic encoder derived from H by GF(2) elimination.

    Message bits land on the non-pivot (free) columns; pivot columns carry
    the parity values ``P @ u mod 2``.  ``H @ encode(u) = 0`` for every u.
    """

    n: int
    k: int
    pivot_cols: np.ndarray = field(repr=False)
    free_cols: np.ndarray = field(repr=False)
    parity_map: np.ndarray = field(repr=False)  # (rank, k) over GF(2)

    @property
    def column_permutation(self):
        return np.concatenate([self.free_cols, self.pivot_cols])

    def encode(self, u):
        u = np.asarray(u, dtype=np.uint8)
        if len(u) != self.k:
            raise ValueError(f"message length {len(u)} != k={self.k}")
        v = np.zeros(self.n, dtype=np.uint8)
        v[self.free_cols] = u
        v[self.pivot_cols] = (self.parity_map @ u.astype(np.int64)) % 2
        return v


def build_encoder(graph: TannerGraph, k_design: int | None = None, slack: float = 0.02) -> Encoder:
    """Gaussian-eliminate H once and return the encoder.

    Redundant rows are dropped; the realized message length is n - rank(H).
    If a design dimension is given and the realized one exceeds it by more
    than ``slack * n`` (severe rank deficiency), raise so the caller can
    retry the construction with another seed.
    """
    H = graph.h_matrix()
    R, pivots = _gf2_rref(H)
    n = graph.n_var
    rank = len(pivots)
    k = n - rank
    if k_design is not None and k > k_design + slack * n:
        raise EncoderBuildError(
            f"rank {rank} leaves k={k}, beyond design k={k_design}"
        )
    free = np.setdiff1d(np.arange(n, dtype=np.int64), pivots)
    return Encoder(
        n=n,
        k=k,
        pivot_cols=pivots,
        free_cols=free,
        parity_map=R[:, free].astype(np.uint8),
    )


def syndrome(graph: TannerGraph, v):
    v = np.asarray(v, dtype=np.int64)
    out = np.zeros(graph.n_chk, dtype=np.int64)
    for i in range(graph.n_var):
        if v[i]:
            out[graph.var_adj[i, : graph.var_deg[i]]] ^= 1
    return out


# ---------------------------------------------------------------------------
# alist interchange


def save_alist(graph: TannerGraph, path):
    counts = graph.chk_degrees()
    chk_lists = [[] for _ in range(graph.n_chk)]
    for v in range(graph.n_var):
        for c in graph.adjacency(v):
            chk_lists[c].append(v)
    max_v = int(graph.var_deg.max())
    max_c = int(counts.max())
    with open(path, "w") as f:
        f.write(f"{graph.n_var} {graph.n_chk}\n")
        f.write(f"{max_v} {max_c}\n")
        f.write(" ".join(str(int(d)) for d in graph.var_deg) + "\n")
        f.write(" ".join(str(int(d)) for d in counts) + "\n")
        for v in range(graph.n_var):
            row = [c + 1 for c in graph.adjacency(v)]
            row += [0] * (max_v - len(row))
            f.write(" ".join(map(str, row)) + "\n")
        for c in range(graph.n_chk):
            row = [v + 1 for v in sorted(chk_lists[c])]
            row += [0] * (max_c - len(row))
            f.write(" ".join(map(str, row)) + "\n")


def load_alist(path) -> TannerGraph:
    with open(path) as f:
        tokens = f.read().split("\n")
    n, m = map(int, tokens[0].split())
    max_v, _ = map(int, tokens[1].split())
    var_deg = np.array(tokens[2].split(), dtype=np.int64)
    var_adj = np.full((n, max_v), -1, dtype=np.int64)
    for v in range(n):
        entries = [int(t) - 1 for t in tokens[4 + v].split() if int(t) > 0]
        if len(entries) != var_deg[v]:
            raise ValueError(f"alist variable {v}: degree mismatch")
        var_adj[v, : len(entries)] = sorted(entries)
    graph = TannerGraph(
        n_var=n, n_chk=m, var_deg=var_deg, var_adj=var_adj, girth=0, saturated=True
    )
    graph.girth = exact_girth(graph)
    return graph


@njit(cache=True, nogil=True)
def _girth_core(var_deg, var_adj, chk_ptr, chk_edge_var, n, m):
    # BFS from every variable; every non-tree edge (u, c) encountered yields
    # a cycle bound dist(u) + dist(c) + 1, and the minimum over all roots is
    # the exact girth.
    dist_v = np.full(n, -1, dtype=np.int64)
    dist_c = np.full(m, -1, dtype=np.int64)
    par_v = np.full(n, -1, dtype=np.int64)  # check that discovered the var
    par_c = np.full(m, -1, dtype=np.int64)  # var that discovered the check
    stamp_v = np.full(n, -1, dtype=np.int64)
    stamp_c = np.full(m, -1, dtype=np.int64)
    frontier = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    new_checks = np.empty(m, dtype=np.int64)
    best = np.int64(1 << 60)

    for root in range(n):
        stamp = root
        stamp_v[root] = stamp
        dist_v[root] = 0
        par_v[root] = -1
        n_frontier = 1
        frontier[0] = root
        depth = 0
        while n_frontier > 0 and 2 * depth < best:
            n_new = 0
            for fi in range(n_frontier):
                v = frontier[fi]
                for k in range(var_deg[v]):
                    c = var_adj[v, k]
                    if c == par_v[v]:
                        continue
                    if stamp_c[c] != stamp:
                        stamp_c[c] = stamp
                        dist_c[c] = dist_v[v] + 1
                        par_c[c] = v
                        new_checks[n_new] = c
                        n_new += 1
                    else:
                        cyc = dist_v[v] + dist_c[c] + 1
                        if cyc < best:
                            best = cyc
            n_next = 0
            for ci in range(n_new):
                c = new_checks[ci]
                for k in range(chk_ptr[c], chk_ptr[c + 1]):
                    u = chk_edge_var[k]
                    if u == par_c[c]:
                        continue
                    if stamp_v[u] != stamp:
                        stamp_v[u] = stamp
                        dist_v[u] = dist_c[c] + 1
                        par_v[u] = c
                        nxt[n_next] = u
                        n_next += 1
                    else:
                        cyc = dist_c[c] + dist_v[u] + 1
                        if cyc < best:
                            best = cyc
            for i in range(n_next):
                frontier[i] = nxt[i]
            n_frontier = n_next
            depth += 1
    return best


def exact_girth(graph: TannerGraph) -> int:
    """Shortest cycle length by BFS from every variable node (0 if acyclic)."""
    edge_var, chk_ptr = graph.edge_layout()
    best = _girth_core(
        graph.var_deg,
        graph.var_adj,
        chk_ptr,
        edge_var,
        graph.n_var,
        graph.n_chk,
    )
    return int(best) if best < (1 << 59) else 0
