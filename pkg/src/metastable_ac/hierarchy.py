"""Metastable hierarchies of the ring potential.

Two levels are covered: the families B_0, ..., B_kmax at gamma = 0 and the
particle/hole configurations inside B_0, which for small gamma > 0 are
ordered by their number of interfaces.
"""
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import check_bits, check_size
from .errors import InputError, InvariantError
from .symmetry import canonical_form

# ---------------------------------------------------------------- families


def family_potential_exact(n, k, family):
    """V_0 on B_k or C_k as an exact fraction."""
    n = check_size(n)
    m = n // 2
    family = family.upper()
    if family == "B":
        if not 0 <= k <= n // 6:
            raise InputError(f"k={k} out of range for B at n={n}")
        a = m - k
        return Fraction(-a * n * (n - a), 4 * (n * n - 3 * a * n + 3 * a * a))
    if family == "C":
        if not 1 <= k <= n // 6:
            raise InputError(f"k={k} out of range for C at n={n}")
        a = m - k + 1  # C_k is the saddle above B_{k-1}
        num = a * n * n - (a * a + 8 * a - 8) * n + 9 * a * (a - 1)
        return Fraction(-num, 4 * (n * n - 3 * a * n + 3 * a * a - 3 * a + 3))
    raise InputError(f"unknown family {family!r}")


def family_potential(n, k, family):
    return float(family_potential_exact(n, k, family))


def barrier_functions(n, a):
    """(h1(a), h2(a)): climbing from B_k to C_{k+1} and to C_k, with a = M - k."""
    n = check_size(n)
    if not (3 * a > n and 2 * a <= n):
        raise InputError(f"a={a} outside (n/3, n/2] for n={n}")
    d0 = n * n - 3 * a * n + 3 * a * a
    h1 = Fraction((a - 1) * (2 * n - 3 * a) ** 3, 4 * d0 * (d0 - 3 * a + 3))
    h2 = Fraction((n - a - 1) * (3 * a - n) ** 3,
                  4 * d0 * (n * n - 3 * (a + 1) * n + 3 * a * a + 3 * a + 3))
    return h1, h2


def barrier_chain(n):
    """The increasing chain h2(M-kmax) < ... < h2(M-1) < h1(M) < ... < h1(M-kmax+1)."""
    m, km = n // 2, n // 6
    left = [barrier_functions(n, m - k)[1] for k in range(km, 0, -1)]
    right = [barrier_functions(n, m - k)[0] for k in range(0, km)]
    return left + right


@dataclass
class HierarchyReport:
    blocks: list
    theta: float
    escape: dict
    departure: dict = field(default_factory=dict)
    exact: bool = False
    notes: list = field(default_factory=list)

    @property
    def valid(self):
        return self.theta > 0

    def to_dict(self):
        conv = (lambda v: str(v)) if self.exact else float
        return {
            "blocks": list(self.blocks),
            "theta": float(self.theta),
            "theta_exact": str(self.theta) if self.exact else None,
            "escape": {k: float(v) for k, v in self.escape.items()},
            "escape_exact": {k: conv(v) for k, v in self.escape.items()} if self.exact else None,
            "departure": {k: float(v) for k, v in self.departure.items()},
            "notes": list(self.notes),
        }


def _theta(blocks, escape, departure):
    theta = None
    for kk in range(1, len(blocks)):
        lower = min(departure[b] for b in blocks[:kk])
        gap = lower - escape[blocks[kk]]
        theta = gap if theta is None else min(theta, gap)
    return theta


def verify_Bk_hierarchy(n, gamma=0.0, step=0.01):
    """Check the order B_0 < B_1 < ... < B_kmax and return its margin theta.

    At gamma = 0 the closed forms are used exactly. For gamma > 0 every
    orbit representative is continued and the heights are recomputed from
    the continued potentials.
    """
    n = check_size(n)
    km = n // 6
    blocks = [f"B_{k}" for k in range(km + 1)]
    if gamma == 0:
        m = n // 2
        escape = {"B_0": None}
        departure = {}
        for k in range(km + 1):
            h1, h2 = barrier_functions(n, m - k)
            if k >= 1:
                escape[f"B_{k}"] = h2
            departure[f"B_{k}"] = h1 if k == 0 else (min(h1, h2) if k < km else h2)
        chain = barrier_chain(n)
        if any(b >= c for b, c in zip(chain, chain[1:])):
            raise InvariantError(f"barrier chain is not increasing at n={n}")
        escape.pop("B_0")
        theta = _theta(blocks, escape, departure)
        if theta is None or theta <= 0:
            raise InvariantError(f"B_k order violated at n={n}: theta={theta}")
        return HierarchyReport(blocks, theta, escape, departure, exact=True)
    from .landscape import build_transition_graph, continue_to_gamma
    graph = build_transition_graph(n, "orbits")
    mins = [continue_to_gamma(p, gamma, step=step) for p in graph.minima]
    sads = [continue_to_gamma(p, gamma, step=step) for p in graph.saddles]
    esc_point, dep_point = {}, {}
    for s, lo, hi in graph.edges:
        vz = sads[s].potential
        esc_point[hi] = min(esc_point.get(hi, math.inf), vz - mins[hi].potential)
        for i in (lo, hi):
            dep_point[i] = min(dep_point.get(i, math.inf), vz - mins[i].potential)
    escape, departure = {}, {}
    for i, p in enumerate(mins):
        b = p.family
        if b != "B_0":
            escape[b] = max(escape.get(b, -math.inf), esc_point[i])
        departure[b] = min(departure.get(b, math.inf), dep_point[i])
    theta = _theta(blocks, escape, departure)
    if theta is None or theta <= 0:
        raise InvariantError(f"B_k order violated at n={n}, gamma={gamma}: theta={theta}")
    return HierarchyReport(blocks, theta, escape, departure,
                           notes=[f"continued to gamma={gamma} over {len(mins)} minimum and "
                                  f"{len(sads)} saddle orbits"])


# ------------------------------------------------------ interface states


@dataclass(frozen=True)
class InterfaceState:
    bits: tuple
    p: int
    isolated_count: int
    klass: str

    @property
    def n(self):
        return len(self.bits)

    @property
    def m(self):
        return len(self.bits) // 2

    def array(self):
        return np.array(self.bits, dtype=np.int8)


def _interfaces_at(b):
    """Number of opposite-sign neighbours of each site."""
    return (b != np.roll(b, 1)).astype(int) + (b != np.roll(b, -1)).astype(int)


def class_label(p, isolated_count, m):
    if p == 2:
        return "A_2"
    if 4 <= p <= m and isolated_count == 0:
        return f"A'_{p}"
    return f"A_{p}"


def classify_B0_state(bits):
    """Interface count, isolated sites and A_p / A'_p class of a +-1 word."""
    b = check_bits(bits)
    p = int(np.sum(b != np.roll(b, -1)))
    iso = int(np.sum(_interfaces_at(b) == 2))
    return InterfaceState(tuple(int(v) for v in b), p, iso, class_label(p, iso, b.size // 2))


def block_state(n):
    m = check_size(n) // 2
    return classify_B0_state([1] * m + [-1] * m)


def alternating_state(n):
    check_size(n)
    return classify_B0_state([1 if i % 2 == 0 else -1 for i in range(n)])


@dataclass(frozen=True)
class SaddleInterfaceTriple:
    i01: int
    i02: int
    i12: int

    def __post_init__(self):
        if self.i01 + self.i02 != 2 or min(self.i01, self.i02, self.i12) < 0:
            raise InputError(f"invalid saddle interface triple {self.astuple()}")

    def astuple(self):
        return (self.i01, self.i02, self.i12)


def saddle_first_order_exact(z_class, n):
    """First-order coefficient V^1 of a C_1 saddle's potential in gamma."""
    if not isinstance(z_class, SaddleInterfaceTriple):
        z_class = SaddleInterfaceTriple(*z_class)
    m = check_size(n) // 2
    d = m * m - 3 * m + 3
    return Fraction(m * m * z_class.i01 + (m - 3) ** 2 * z_class.i02
                    + (2 * m - 3) ** 2 * z_class.i12, 4 * d)


def saddle_first_order(z_class, n):
    return float(saddle_first_order_exact(z_class, n))


def lemma_b1_ordering(n):
    """V^1[2,0,p] > V^1[0,2,p] > V^1[1,1,p-1] > V^1[2,0,p-2] for even p in [2, n-2]."""
    ok = True
    for p in range(2, n - 1, 2):
        v = [saddle_first_order_exact(SaddleInterfaceTriple(*t), n)
             for t in ((2, 0, p), (0, 2, p), (1, 1, p - 1), (2, 0, p - 2))]
        ok &= v[0] > v[1] > v[2] > v[3]
    return bool(ok)


def h0_exact(n):
    m = check_size(n) // 2
    return Fraction(m * (m - 1), 4 * (m * m - 3 * m + 3))


# Table of first-order heights: numerator of H^1 as a function of (M, p),
# the saddle class as a function of p, and the change of p.
_TABLE = {
    "I": (lambda m, p: 10 * m * m - 36 * m + 36 - 3 * p, lambda p: (0, 2, p + 2), 4),
    "II": (lambda m, p: 2 * (m - 3) ** 2 - 3 * p, lambda p: (0, 2, p), 2),
    "III": (lambda m, p: -2 * m * m + 6 * m - 3 * p, lambda p: (1, 1, p - 1), 0),
    "IV": (lambda m, p: -6 * m * m + 12 * m - 3 * p, lambda p: (0, 2, p - 2), 0),
    "V": (lambda m, p: -6 * m * m + 12 * m - 3 * p, lambda p: (0, 2, p - 2), -2),
    "VI": (lambda m, p: -6 * m * m + 12 * m - 3 * p, lambda p: (0, 2, p - 2), -4),
}
GROUPED_ROWS = ("V", "VI")


def table_h1(transition_type, p, n):
    """H^1 read off the table row of a transition type (subtype letters ignored)."""
    m = check_size(n) // 2
    row = transition_type.split(".")[0]
    num, _, _ = _TABLE[row]
    return Fraction(num(m, p), 4 * (m * m - 3 * m + 3))


def table_saddle_class(transition_type, p):
    return SaddleInterfaceTriple(*_TABLE[transition_type.split(".")[0]][1](p))


def table_delta_p(transition_type):
    return _TABLE[transition_type.split(".")[0]][2]


def transition_type(eta_i, eta_j, adjacent):
    """Row label of a particle/hole exchange from the interface counts of both sites."""
    if adjacent:
        return {(1, 1): "II.c", (1, 2): "IV.c", (2, 1): "IV.d", (2, 2): "V.c"}[(eta_i, eta_j)]
    return {(0, 0): "I", (0, 1): "II.a", (1, 0): "II.b", (1, 1): "III", (0, 2): "IV.a",
            (2, 0): "IV.b", (1, 2): "V.a", (2, 1): "V.b", (2, 2): "VI"}[(eta_i, eta_j)]


@dataclass(frozen=True)
class CommHeight:
    h0: Fraction
    h1: Fraction
    transition_type: str
    delta_p: int
    saddle_class: SaddleInterfaceTriple
    grouped: bool = False

    def value(self, gamma):
        return float(self.h0) + gamma * float(self.h1)


@dataclass(frozen=True)
class Move:
    site_pair: tuple
    transition_type: str
    delta_p: int
    comm_height: CommHeight
    target: tuple


def _saddle_triple(labels):
    """Interface counts of a three-valued word (0 = alpha'_0, 1, 2)."""
    nxt = np.roll(labels, -1)
    c01 = int(np.sum(((labels == 0) & (nxt == 1)) | ((labels == 1) & (nxt == 0))))
    c02 = int(np.sum(((labels == 0) & (nxt == 2)) | ((labels == 2) & (nxt == 0))))
    c12 = int(np.sum(((labels == 1) & (nxt == 2)) | ((labels == 2) & (nxt == 1))))
    return SaddleInterfaceTriple(c01, c02, c12)


def _two_step_words(b, i, j):
    """Label words of the two saddles on each path, with the sign branch of alpha'_1."""
    part, hole = b == 1, b == -1
    out = []
    for sign, common, first, second in ((1, part, i, j), (-1, hole, j, i)):
        keep = common.copy()
        keep[first] = False
        za = np.where(keep, 1, 2)
        za[first] = 0
        zb = np.where(keep, 1, 2)
        zb[second] = 0
        out.append((sign, za, zb))
    return out


def two_step_saddles(bits, i, j):
    """The C_1 saddles met when particle i and hole j are exchanged via B_1.

    Two paths exist, one through a B_1 point whose large coordinates sit on
    the common particles and one through a B_1 point whose large coordinates
    sit on the common holes. Each path crosses two saddles; the labels 0, 1, 2
    mark the sites of alpha'_0, alpha'_1 and alpha'_2.
    """
    b = np.asarray(bits)
    return [(_saddle_triple(za), _saddle_triple(zb)) for _, za, zb in _two_step_words(b, i, j)]


def direct_comm_height(bits, i, j, gamma, step=0.01, cache=None):
    """Communication height of a move from continued stationary points.

    Both saddles of both paths are continued to ``gamma``; the result is the
    minimum over paths of the higher saddle value, minus the continued value
    of the start minimum. No first-order formula is used.
    """
    from .landscape import continue_to_gamma, point_from_labels
    b = check_bits(bits)
    n = b.size
    m = n // 2
    cache = {} if cache is None else cache

    def value(labels, triple, sign):
        point = point_from_labels(labels, triple, sign=sign, check_index=False)
        key = point.canonical_key()
        if key not in cache:
            cache[key] = continue_to_gamma(point, gamma, step=step).potential
        return cache[key]

    start = value(np.where(b == 1, 1, 2), (0, m, m), 1)
    best = math.inf
    for sign, za, zb in _two_step_words(b, i, j):
        top = max(value(za, (1, m - 1, m), sign), value(zb, (1, m - 1, m), sign))
        best = min(best, top)
    return best - start


def move_comm_height(bits, i, j):
    """First-order communication height of exchanging particle i and hole j.

    The minimum over both paths of the highest saddle on the path, with the
    start state's first-order energy p subtracted.
    """
    b = np.asarray(bits)
    n = b.size
    p = int(np.sum(b != np.roll(b, -1)))
    best = None
    for za, zb in two_step_saddles(b, i, j):
        va, vb = saddle_first_order_exact(za, n), saddle_first_order_exact(zb, n)
        top, cls = (va, za) if va >= vb else (vb, zb)
        cand = (top, cls.astuple())
        if best is None or cand < best:
            best = cand
    return best[0] - p, SaddleInterfaceTriple(*best[1])


def allowed_moves(state):
    """Every particle/hole exchange from a B_0 configuration with its height."""
    if not isinstance(state, InterfaceState):
        state = classify_B0_state(state)
    b = state.array()
    n = b.size
    if n < 8:
        raise InputError("interface dynamics needs n >= 8")
    eta = _interfaces_at(b)
    h0 = h0_exact(n)
    moves = []
    for i in np.flatnonzero(b == 1):
        for j in np.flatnonzero(b == -1):
            adjacent = (j - i) % n in (1, n - 1)
            ttype = transition_type(int(eta[i]), int(eta[j]), adjacent)
            nb = b.copy()
            nb[i], nb[j] = -1, 1
            dp = int(np.sum(nb != np.roll(nb, -1))) - state.p
            h1, cls = move_comm_height(b, int(i), int(j))
            ch = CommHeight(h0, h1, ttype, dp, cls, ttype.split(".")[0] in GROUPED_ROWS)
            moves.append(Move((int(i), int(j)), ttype, dp, ch, tuple(int(v) for v in nb)))
    return moves


# ------------------------------------------------------------ A hierarchy


def a_blocks(n):
    m = check_size(n) // 2
    mp = m if m % 2 == 0 else m - 1
    return (["A_2"] + [f"A'_{p}" for p in range(4, mp + 1, 2)]
            + [f"A_{p}" for p in range(4, n + 1, 2)])


def verify_A_hierarchy(n):
    """Order of the interface classes and its first-order margin.

    Heights are first-order coefficients in gamma (the common zeroth-order
    height cancels), so the returned theta is the coefficient of gamma.
    """
    n = check_size(n)
    if n < 8:
        raise InputError("the interface hierarchy needs n >= 8")
    m = n // 2
    d4 = 4 * (m * m - 3 * m + 3)
    blocks = a_blocks(n)
    escape, departure = {}, {}
    for blk in blocks[1:]:
        p = int(blk.split("_")[1])
        if blk.startswith("A'"):
            escape[blk] = Fraction(-2 * m * m + 6 * m - 3 * p, d4)
        else:
            escape[blk] = Fraction(-6 * m * m + 12 * m - 3 * p, d4)
    departure["A_2"] = Fraction(2 * (m - 3) ** 2 - 6, d4)
    for blk in blocks[1:]:
        departure[blk] = escape[blk]
    theta = _theta(blocks, escape, departure)
    if theta <= 0:
        raise InvariantError(f"A-class order violated at n={n}: theta={theta}")
    return HierarchyReport(blocks, theta, escape, departure, exact=True,
                           notes=["heights are first-order coefficients of gamma"])


def canonical_bits(bits):
    key, _ = canonical_form(np.asarray(bits, dtype=float), decimals=0)
    return tuple(int(v) for v in key)


def state_orbits(n):
    """Canonical representatives of balanced words under the symmetry group."""
    from .symmetry import balanced_words
    reps = {}
    for w in balanced_words(n):
        s = "".join("1" if v > 0 else "0" for v in w)
        f = s.translate(str.maketrans("01", "10"))
        cands = []
        for t in (s, s[::-1], f, f[::-1]):
            cands.extend(t[k:] + t[:k] for k in range(n))
        reps.setdefault(min(cands), 0)
        reps[min(cands)] += 1
    return {tuple(1 if c == "1" else -1 for c in k): v for k, v in reps.items()}


def _canon_string(b):
    s = "".join("1" if v > 0 else "0" for v in b)
    f = s.translate(str.maketrans("01", "10"))
    n = len(s)
    return min(t[k:] + t[:k] for t in (s, s[::-1], f, f[::-1]) for k in range(n))


def state_graph(n):
    """Quotient move graph: orbit key -> list of (neighbour key, saddle level V^1)."""
    reps = state_orbits(n)
    keyof = {k: _canon_string(k) for k in reps}
    graph = {}
    info = {}
    for rep in reps:
        st = classify_B0_state(rep)
        info[keyof[rep]] = st
        edges = {}
        for mv in allowed_moves(st):
            tgt = _canon_string(mv.target)
            level = mv.comm_height.h1 + st.p
            if tgt not in edges or level < edges[tgt]:
                edges[tgt] = level
        graph[keyof[rep]] = edges
    return graph, info


def minimax_heights(graph, sources):
    """Smallest possible highest saddle level on a path from each node to ``sources``."""
    heap = []
    dist = {}
    for s in sources:
        dist[s] = -math.inf
        heapq.heappush(heap, (-math.inf, s))
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        for v, w in graph[u].items():
            nd = max(d, w)
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def brute_force_A_hierarchy(n, blocks=None):
    """Margin of the interface-class order from exact minimax paths on the move graph.

    Independent of the closed-form escape heights: every communication
    height is computed from the explicit two-path saddle construction, and
    paths may visit any configuration.
    """
    graph, info = state_graph(n)
    blocks = a_blocks(n) if blocks is None else blocks
    members = {b: [k for k, st in info.items() if st.klass == b] for b in blocks}

    def height(targets, starts):
        dist = minimax_heights(graph, targets)
        return [dist[k] - info[k].p for k in starts]

    escape, departure, theta = {}, {}, None
    for kk in range(1, len(blocks)):
        lower = [k for b in blocks[:kk] for k in members[b]]
        escape[blocks[kk]] = max(height(lower, members[blocks[kk]]))
        for ll in range(kk):
            targets = [k for c in blocks[: kk + 1] if c != blocks[ll] for k in members[c]]
            dep = min(height(targets, members[blocks[ll]]))
            if ll == kk - 1:
                departure[blocks[ll]] = dep
            gap = dep - escape[blocks[kk]]
            theta = gap if theta is None else min(theta, gap)
    return HierarchyReport(blocks, theta, escape, departure, exact=True,
                           notes=["minimax paths on the quotient move graph"])


def class_move_graph(n):
    """Lowest first-order height between interface classes, for DOT export."""
    graph, info = state_graph(n)
    edges = {}
    for u, nb in graph.items():
        for v, level in nb.items():
            a, b = info[u].klass, info[v].klass
            if a == b:
                continue
            h = level - info[u].p
            if (a, b) not in edges or h < edges[(a, b)]:
                edges[(a, b)] = h
    return edges


# ------------------------------------------------------ disconnectivity


@dataclass
class TreeNode:
    name: str
    level: float
    children: list = field(default_factory=list)
    minimum: str = None  # deepest minimum below this node

    def leaves(self):
        if not self.children:
            return [self.name]
        return [leaf for c in self.children for leaf in c.leaves()]

    def to_dict(self):
        return {"name": self.name, "level": float(self.level), "minimum": self.minimum,
                "children": [c.to_dict() for c in self.children]}


@dataclass
class DisconnectivityTree:
    roots: list
    order: list
    heights: dict
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {"roots": [r.to_dict() for r in self.roots], "order": list(self.order),
                "heights": {k: float(v) for k, v in self.heights.items()},
                "warnings": list(self.warnings)}

    def to_dot(self):
        lines = ["digraph disconnectivity {", "  rankdir=BT;"]
        seen = set()

        def walk(node):
            if id(node) in seen:
                return
            seen.add(id(node))
            shape = "box" if node.children else "ellipse"
            lines.append(f'  "{node.name}" [label="{node.name}\\nV={node.level:.6g}", shape={shape}];')
            for c in node.children:
                walk(c)
                lines.append(f'  "{c.name}" -> "{node.name}";')
        for r in self.roots:
            walk(r)
        lines.append("}")
        return "\n".join(lines) + "\n"


def disconnectivity_tree(minima, saddles):
    """Join minima at the lowest saddles connecting them.

    Parameters
    ----------
    minima : dict
        Name -> potential value.
    saddles : iterable of (name, potential, minimum_a, minimum_b)

    Returns
    -------
    DisconnectivityTree
        ``order`` lists the minima from deepest to shallowest in the
        metastable order; ``heights`` holds the height at which each
        non-deepest minimum merges with a deeper one.
    """
    if not minima:
        raise InputError("no minima given")
    parent = {k: k for k in minima}
    node = {k: TreeNode(k, float(v), minimum=k) for k, v in minima.items()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    heights = {}
    for name, level, a, b in sorted(saddles, key=lambda s: (float(s[1]), str(s[0]))):
        if a not in minima or b not in minima:
            raise InputError(f"saddle {name} refers to an unknown minimum")
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        na, nb = node[ra], node[rb]
        da, db = minima[na.minimum], minima[nb.minimum]
        deep, shallow = (na, nb) if (da, na.minimum) <= (db, nb.minimum) else (nb, na)
        heights[shallow.minimum] = float(level) - float(minima[shallow.minimum])
        merged = TreeNode(str(name), float(level), [deep, shallow], minimum=deep.minimum)
        parent[find(shallow.minimum)] = ra if deep is na else rb
        parent[ra if deep is nb else rb] = ra if deep is na else rb
        node[find(a)] = merged
    roots = {find(k) for k in minima}
    root_nodes = [node[r] for r in sorted(roots, key=lambda r: (minima[node[r].minimum], r))]
    warnings = [] if len(root_nodes) == 1 else [f"disconnected input: {len(root_nodes)} components"]
    deepest = [r.minimum for r in root_nodes]
    rest = sorted((k for k in minima if k not in deepest), key=lambda k: (-heights[k], k))
    return DisconnectivityTree(root_nodes, deepest + rest, heights, warnings)


def family_tree(n):
    """Family-level tree at gamma = 0: B_k leaves joined at the C_k saddles."""
    km = n // 6
    minima = {f"B_{k}": family_potential_exact(n, k, "B") for k in range(km + 1)}
    saddles = [(f"C_{k}", family_potential_exact(n, k, "C"), f"B_{k - 1}", f"B_{k}")
               for k in range(1, km + 1)]
    return disconnectivity_tree(minima, saddles)


# --------------------------------------------------- vectorised move table

_TYPE_CODES = ["I", "II.a", "II.b", "III", "IV.a", "IV.b", "V.a", "V.b", "VI",
               "II.c", "IV.c", "IV.d", "V.c"]
_FAR = np.array([[0, 1, 4], [2, 3, 6], [5, 7, 8]])          # eta_i x eta_j, non-adjacent
_NEAR = np.array([[-1, -1, -1], [-1, 9, 10], [-1, 11, 12]])  # adjacent pairs


def table_moves(bits):
    """All moves of a state as arrays, with heights read from the table rows.

    Returns (i, j, type_code, delta_p, h1) with ``type_code`` indexing
    ``TYPE_CODES``. Agrees with :func:`allowed_moves` (tested exhaustively
    for small rings) and is fast enough for long jump-chain runs.
    """
    b = np.asarray(bits)
    n = b.size
    m = n // 2
    d4 = 4.0 * (m * m - 3 * m + 3)
    p = int(np.count_nonzero(b != np.roll(b, -1)))
    eta = (b != np.roll(b, 1)).astype(int) + (b != np.roll(b, -1)).astype(int)
    ii, jj = np.flatnonzero(b == 1), np.flatnonzero(b == -1)
    i, j = np.repeat(ii, jj.size), np.tile(jj, ii.size)
    dist = (j - i) % n
    adjacent = (dist == 1) | (dist == n - 1)
    ei, ej = eta[i], eta[j]
    code = np.where(adjacent, _NEAR[ei, ej], _FAR[ei, ej])
    dp = np.where(adjacent, 6 - 2 * (ei + ej), 4 - 2 * (ei + ej))
    per_row = np.array([_TABLE[r][0](m, p) for r in _ROWS], dtype=float) / d4
    return i, j, code, dp, per_row[_CODE_ROW[code]]


TYPE_CODES = tuple(_TYPE_CODES)
_ROWS = ("I", "II", "III", "IV", "V", "VI")
_CODE_ROW = np.array([_ROWS.index(t.split(".")[0]) for t in _TYPE_CODES])


