"""Spanning trees of the complete bipartite graph K_{n,n}.

Row node ``i`` carries the row-sum (nu_i) equation and column node ``j`` the
column-sum (mu_j) equation of the transportation polytope; an edge ``(i, j)``
is the matrix entry ``pi_ij``.  Indices are 0-based internally.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import CapabilityError
from .forms import AffineForm

Edge = tuple[int, int]
MAX_EXHAUSTIVE_N = 5


def row(i: int) -> tuple[str, int]:
    return ("r", i)


def col(j: int) -> tuple[str, int]:
    return ("c", j)


@dataclass(frozen=True)
class TreeSimplex:
    """Maximal simplex of Delta_{n-1} x Delta_{n-1}: a spanning tree of K_{n,n}."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(sorted(set((int(i), int(j)) for i, j in self.edges)))
        object.__setattr__(self, "edges", edges)
        if len(edges) != 2 * self.n - 1:
            raise ValueError(f"a spanning tree of K_{{n,n}} has {2 * self.n - 1} edges")
        if not _is_connected(self.n, edges):
            raise ValueError("edges do not form a spanning tree")

    @classmethod
    def from_complement(cls, n: int, missing: Sequence[Edge]) -> "TreeSimplex":
        """Tree whose non-edges are ``missing`` (0-based pairs)."""
        gone = set(missing)
        return cls(n, tuple((i, j) for i in range(n) for j in range(n) if (i, j) not in gone))

    def complement(self) -> tuple[Edge, ...]:
        present = set(self.edges)
        return tuple((i, j) for i in range(self.n) for j in range(self.n) if (i, j) not in present)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in set(self.edges)

    def adjacency(self) -> dict:
        adj = {row(i): [] for i in range(self.n)}
        adj.update({col(j): [] for j in range(self.n)})
        for i, j in self.edges:
            adj[row(i)].append(col(j))
            adj[col(j)].append(row(i))
        return adj

    def degree(self, node) -> int:
        kind, k = node
        return sum(1 for i, j in self.edges if (i if kind == "r" else j) == k)

    def label(self) -> str:
        return " ".join(f"{i + 1}{j + 1}" for i, j in self.edges)


def _is_connected(n: int, edges) -> bool:
    parent = list(range(2 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = 2 * n
    for i, j in edges:
        a, b = find(i), find(n + j)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps == 1


def tree_path(sigma: TreeSimplex, start, end) -> list:
    """Node sequence of the unique tree path from ``start`` to ``end``."""
    adj = sigma.adjacency()
    prev = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == end:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [end]
    while path[-1] != start:
        path.append(prev[path[-1]])
    return path[::-1]


def _node_edge(a, b) -> Edge:
    return (a[1], b[1]) if a[0] == "r" else (b[1], a[1])


def cycle_signs(sigma: TreeSimplex, edge: Edge) -> dict[Edge, int]:
    """Signed cycle closed by a non-tree edge.

    The non-tree edge gets +1; walking the tree path from its row node to its
    column node, tree edges alternate -1, +1, -1, ... .  Summing ``d`` against
    these signs gives the reduced cost of ``edge`` in the basis ``sigma``.
    """
    i, j = edge
    if (i, j) in set(sigma.edges):
        raise ValueError(f"edge {(i + 1, j + 1)} is a tree edge")
    path = tree_path(sigma, row(i), col(j))
    signs = {edge: 1}
    s = -1
    for a, b in zip(path, path[1:]):
        signs[_node_edge(a, b)] = s
        s = -s
    return signs


def reduced_cost(sigma: TreeSimplex, cost, edge: Edge):
    """``d_edge`` minus the alternating sum of ``d`` along the tree path.

    ``cost`` is any n x n matrix of numbers supporting ``+``, ``-`` and ``*`` by
    ints (Fractions, or the lexicographic perturbation numbers).
    """
    total = None
    for (a, b), s in cycle_signs(sigma, edge).items():
        term = cost[a][b] if s > 0 else -cost[a][b]
        total = term if total is None else total + term
    return total


def tree_duals(sigma: TreeSimplex, cost):
    """Potentials ``u`` (rows), ``v`` (cols) with ``u_i + v_j = cost_ij`` on the tree, ``u_0 = 0``."""
    n = sigma.n
    zero = cost[0][0] - cost[0][0]
    u = [None] * n
    v = [None] * n
    u[0] = zero
    adj = sigma.adjacency()
    queue = deque([row(0)])
    seen = {row(0)}
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y[0] == "c":
                v[y[1]] = cost[x[1]][y[1]] - u[x[1]]
            else:
                u[y[1]] = cost[y[1]][x[1]] - v[x[1]]
            queue.append(y)
    return u, v


def enumerate_spanning_trees(n: int) -> list[TreeSimplex]:
    """Every spanning tree of K_{n,n} exactly once, in canonical order.

    Trees are generated as parent functions rooted at row 0 (each column picks
    a parent row, each other row a parent column), pruning as soon as a parent
    chain closes a cycle.  There are ``n**(2n-2)`` of them.
    """
    if not 2 <= n <= MAX_EXHAUSTIVE_N:
        raise CapabilityError(
            f"exhaustive spanning-tree enumeration supports 2 <= n <= {MAX_EXHAUSTIVE_N}, got n={n}"
        )
    # node ids: rows 0..n-1, columns n..2n-1; assign parents to 1..2n-1
    order = list(range(n, 2 * n)) + list(range(1, n))
    parent = [-1] * (2 * n)
    found: list[tuple[Edge, ...]] = []

    def reaches_root(x: int) -> bool:
        steps = 0
        while x != 0:
            x = parent[x]
            if x == -1:
                return True  # chain ends at an unassigned node: no cycle yet
            steps += 1
            if steps > 2 * n:
                return False
        return True

    def rec(pos: int):
        if pos == len(order):
            edges = []
            for x in range(1, 2 * n):
                a, b = x, parent[x]
                if a >= n:
                    edges.append((b, a - n))
                else:
                    edges.append((a, b - n))
            found.append(tuple(sorted(edges)))
            return
        x = order[pos]
        choices = range(n) if x >= n else range(n, 2 * n)
        for p in choices:
            parent[x] = p
            if reaches_root(x):
                rec(pos + 1)
        parent[x] = -1

    rec(0)
    found.sort()
    return [TreeSimplex(n, e) for e in found]


def solve_tree(sigma: TreeSimplex) -> dict[Edge, AffineForm]:
    """Entries of pi on the tree as affine forms in ``mu1..mun, nu1..nun``.

    Leaves are peeled towards a root node, whose equation is the redundant one
    and is dropped.  The root is a node of maximum degree (rows before columns,
    then lowest index), which reproduces the hand-derived templates.
    """
    n = sigma.n
    adj = {k: list(v) for k, v in sigma.adjacency().items()}
    nodes = [row(i) for i in range(n)] + [col(j) for j in range(n)]
    root = max(nodes, key=lambda x: (len(adj[x]), x[0] == "c", -x[1]))
    marginal = {row(i): AffineForm.var(f"nu{i + 1}") for i in range(n)}
    marginal.update({col(j): AffineForm.var(f"mu{j + 1}") for j in range(n)})
    assigned: dict[Edge, AffineForm] = {}
    remaining = dict(marginal)
    alive = set(nodes)
    while len(alive) > 1:
        leaf = min((x for x in alive if x != root and len(adj[x]) == 1),
                   key=lambda x: (x[0] != "r", x[1]))
        (nb,) = adj[leaf]
        e = _node_edge(leaf, nb)
        val = remaining[leaf]
        assigned[e] = val
        remaining[nb] = remaining[nb] - val
        adj[nb].remove(leaf)
        adj[leaf] = []
        alive.discard(leaf)
    return assigned


def solve_tree_numeric(sigma: TreeSimplex, mu: Sequence[Fraction], nu: Sequence[Fraction]) -> dict[Edge, Fraction]:
    """Numeric leaf-peeling solve of ``A_sigma pi = (mu, nu)``."""
    n = sigma.n
    adj = {k: set(v) for k, v in sigma.adjacency().items()}
    rem = {row(i): Fraction(nu[i]) for i in range(n)}
    rem.update({col(j): Fraction(mu[j]) for j in range(n)})
    out: dict[Edge, Fraction] = {}
    stack = [x for x in adj if len(adj[x]) == 1]
    while stack:
        leaf = stack.pop()
        if len(adj[leaf]) != 1:
            continue
        (nb,) = adj[leaf]
        e = _node_edge(leaf, nb)
        out[e] = rem[leaf]
        rem[nb] -= rem[leaf]
        adj[nb].discard(leaf)
        adj[leaf] = set()
        if len(adj[nb]) == 1:
            stack.append(nb)
    return out


def iter_nontree_edges(sigma: TreeSimplex) -> Iterator[Edge]:
    return iter(sigma.complement())
