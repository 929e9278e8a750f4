"""Birational rewriting on snc divisor dual graphs.

Moves: blowups (outer on a vertex, inner on an edge), blowdowns of
superfluous (-1)-vertices, snc-minimalization, elementary flows on
0-vertices, standard-form search, barks and half-point attachments.

Every mutating operation accepts an optional ``log`` list and appends
JSON-serializable move entries to it; ``replay`` applies such a log to
the original graph and must reproduce the output exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .graphs import (
    DomainError,
    Edge,
    Segment,
    Vertex,
    WeightedGraph,
    branching_number,
    branching_set,
    canonical_encoding,
    classify_segments,
    connected_components,
    is_negative_definite,
)


@dataclass(frozen=True)
class OnVertex:
    """Outer blowup center: a point on one component only."""

    vertex: str


@dataclass(frozen=True)
class OnEdge:
    """Inner blowup center: the intersection point of two components."""

    u: str
    v: str


def fresh_id(g: WeightedGraph, prefix: str = "E") -> str:
    i = 1
    while f"{prefix}{i}" in g.vertices:
        i += 1
    return f"{prefix}{i}"


def _require_divisor(g: WeightedGraph, op: str) -> None:
    if g.kind != "divisor":
        raise DomainError(f"{op} requires a divisor graph, got kind={g.kind!r}")


# ---------------------------------------------------------------------------
# blowups and blowdowns


def blow_up(g: WeightedGraph, center, log: list | None = None,
            new_id: str | None = None) -> WeightedGraph:
    _require_divisor(g, "blow_up")
    out = g.copy()
    eid = new_id or fresh_id(g)
    if eid in g.vertices:
        raise DomainError(f"new vertex id {eid!r} already in use")
    if isinstance(center, OnVertex):
        vid = center.vertex
        if vid not in out.vertices:
            raise DomainError(f"blow_up center vertex {vid!r} not found")
        out.vertices[eid] = Vertex(eid, -1)
        out.add_weight(vid, -1)
        out.edges.append(Edge(eid, vid))
        entry = {"move": "blowup", "center": {"vertex": vid}, "new_id": eid}
    elif isinstance(center, OnEdge):
        target = Edge(center.u, center.v)
        found = next((e for e in out.edges if (e.u, e.v) == (target.u, target.v)), None)
        if found is None:
            raise DomainError(
                f"blow_up center edge ({center.u!r},{center.v!r}) not found"
            )
        out.edges.remove(found)
        out.vertices[eid] = Vertex(eid, -1)
        out.add_weight(found.u, -1)
        out.add_weight(found.v, -1)
        out.edges.append(Edge(eid, found.u))
        out.edges.append(Edge(eid, found.v))
        entry = {"move": "blowup", "center": {"edge": [target.u, target.v]},
                 "new_id": eid}
    else:
        raise DomainError(f"unknown blowup center {center!r}")
    out.resort_edges()
    if log is not None:
        log.append(entry)
    return out


def blow_down(g: WeightedGraph, vid: str, log: list | None = None) -> WeightedGraph:
    _require_divisor(g, "blow_down")
    if vid not in g.vertices:
        raise DomainError(f"blow_down: vertex {vid!r} not found")
    v = g.vertices[vid]
    if v.weight != -1:
        raise DomainError(f"blow_down: weight of {vid!r} is {v.weight}, not -1")
    if v.genus != 0:
        raise DomainError(f"blow_down: {vid!r} has genus {v.genus}, not 0")
    beta = branching_number(g, vid)
    if beta > 2:
        raise DomainError(f"blow_down: branching number of {vid!r} is {beta} > 2")
    nbrs = g.neighbors(vid)
    if len(nbrs) == 2:
        a, b = nbrs
        if any((e.u, e.v) == (min(a, b), max(a, b)) for e in g.edges):
            raise DomainError(
                f"blow_down: neighbors of {vid!r} are already adjacent; "
                "the image would not be snc"
            )
    out = g.copy()
    del out.vertices[vid]
    out.edges = [e for e in out.edges if vid not in (e.u, e.v)]
    for n in nbrs:
        out.add_weight(n, 1)
    if len(nbrs) == 2:
        out.edges.append(Edge(nbrs[0], nbrs[1]))
    out.resort_edges()
    if log is not None:
        log.append({"move": "blowdown", "vertex": vid})
    return out


def is_superfluous(g: WeightedGraph, vid: str) -> bool:
    """Weight -1, rational, meets one or two other components, each once,
    and contracting it keeps the divisor snc."""
    v = g.vertices[vid]
    if v.weight != -1 or v.genus != 0 or v.boundary != 0:
        return False
    beta = branching_number(g, vid)
    if beta not in (1, 2):
        return False
    nbrs = g.neighbors(vid)
    if len(nbrs) != beta:
        return False  # loop or double edge (plumbing input)
    if len(nbrs) == 2:
        a, b = nbrs
        if any((e.u, e.v) == (min(a, b), max(a, b)) for e in g.edges):
            return False
    return True


def _minimalize(g: WeightedGraph, log: list, keyfunc) -> WeightedGraph:
    cur = g
    while True:
        cands = [vid for vid in cur.sorted_ids() if is_superfluous(cur, vid)]
        if not cands:
            return cur
        cands.sort(key=lambda vid: keyfunc(cur, vid))
        cur = blow_down(cur, cands[0], log)


def snc_minimalize(g: WeightedGraph) -> tuple[WeightedGraph, list]:
    """Contract superfluous (-1)-vertices until none remain, lowest id
    first."""
    _require_divisor(g, "snc_minimalize")
    log: list = []
    return _minimalize(g, log, lambda _g, vid: vid), log


def is_snc_minimal(g: WeightedGraph) -> bool:
    return not any(is_superfluous(g, vid) for vid in g.vertices)


# ---------------------------------------------------------------------------
# elementary flows


def elementary_flow(g: WeightedGraph, zero_vertex: str, toward: str,
                    log: list | None = None) -> WeightedGraph:
    """Flow on a non-branching 0-vertex.

    Interior case: [a,0,b] becomes [a+1,0,b-1] where b is the entry of
    the named neighbor (its weight goes up by one, the opposite
    neighbor's weight goes down by one).  Tip case: the outer blowup on
    the 0-vertex followed by contraction of the new vertex; a no-op on
    weights, logged as the two-step composite.
    """
    _require_divisor(g, "elementary_flow")
    if zero_vertex not in g.vertices:
        raise DomainError(f"elementary_flow: vertex {zero_vertex!r} not found")
    v = g.vertices[zero_vertex]
    if v.weight != 0:
        raise DomainError(
            f"elementary_flow: weight of {zero_vertex!r} is {v.weight}, not 0"
        )
    if v.genus != 0 or v.boundary != 0:
        raise DomainError(f"elementary_flow: {zero_vertex!r} must be rational")
    beta = branching_number(g, zero_vertex)
    if beta not in (1, 2):
        raise DomainError(
            f"elementary_flow: branching number of {zero_vertex!r} is {beta}"
        )
    nbrs = g.neighbors(zero_vertex)
    if toward not in nbrs:
        raise DomainError(
            f"elementary_flow: {toward!r} is not a neighbor of {zero_vertex!r}"
        )
    if beta == 1:
        sub: list = []
        mid = blow_up(g, OnVertex(zero_vertex), sub)
        out = blow_down(mid, sub[0]["new_id"], sub)
        if log is not None:
            log.extend(sub)
        return out
    other = next(n for n in nbrs if n != toward)
    out = g.copy()
    out.add_weight(toward, 1)
    out.add_weight(other, -1)
    if log is not None:
        log.append({"move": "flow", "vertex": zero_vertex, "toward": toward})
    return out


# ---------------------------------------------------------------------------
# standard forms


def _linear_standard(entries: tuple) -> bool:
    # [(0)_{2k+1}] or [(0)_{2k}, a_1..a_l] with a_i >= 2, either orientation
    for seq in (entries, tuple(reversed(entries))):
        z = 0
        while z < len(seq) and seq[z] == 0:
            z += 1
        rest = seq[z:]
        if not rest:
            return True  # all zeros, any length
        if z % 2 == 0 and all(a >= 2 for a in rest):
            return True
    return False


def _circular_standard(entries: tuple) -> bool:
    n = len(entries)
    if n == 0:
        return True
    rotations = []
    for seq in (entries, tuple(reversed(entries))):
        for r in range(n):
            rotations.append(seq[r:] + seq[:r])
    for rot in rotations:
        z = 0
        while z < n and rot[z] == 0:
            z += 1
        rest = rot[z:]
        if not rest:
            return True  # ((0)_k, 0)
        if 0 in rest:
            continue  # zeros not contiguous in this rotation
        if z % 2 == 0 and all(a >= 2 for a in rest):
            return True  # ((0)_{2k}, a_1..a_l)
        if len(rest) == 1 and rest[0] >= 0:
            return True  # ((0)_k, a), a >= 0
        if z % 2 == 0 and rest == (1, 1):
            return True  # ((0)_{2k}, 1, 1)
    return False


@dataclass(frozen=True)
class StandardReport:
    standard: bool
    verdicts: tuple  # (Segment, bool) pairs
    branching: frozenset

    def __bool__(self):
        return self.standard

    def to_json_dict(self) -> dict:
        return {
            "standard": self.standard,
            "branching": sorted(self.branching),
            "segments": [
                {
                    "vertices": list(s.vertices),
                    "type": str(s.chain_type),
                    "circular": s.chain_type.circular,
                    "standard": ok,
                }
                for s, ok in self.verdicts
            ],
        }


def is_standard(g: WeightedGraph) -> StandardReport:
    """Every chain of the graph minus its branching set must be a
    standard chain or a standard circular type."""
    report = classify_segments(g)
    verdicts = []
    for seg in report.segments:
        if seg.chain_type.circular:
            ok = _circular_standard(seg.chain_type.entries)
        else:
            ok = _linear_standard(seg.chain_type.entries)
        verdicts.append((seg, ok))
    return StandardReport(
        all(ok for _, ok in verdicts), tuple(verdicts), report.branching
    )


class _SearchCaps:
    def __init__(self, g: WeightedGraph):
        self.max_vertices = max(len(g.vertices), 4) + 4
        wmax = max([abs(v.weight) for v in g.vertices.values()], default=0)
        self.max_abs_weight = max(wmax, 4) + 4
        self.budget = 100_000

    def admits(self, g: WeightedGraph) -> bool:
        if len(g.vertices) > self.max_vertices:
            return False
        return all(
            abs(v.weight) <= self.max_abs_weight for v in g.vertices.values()
        )


def _search_moves(g: WeightedGraph):
    """Deterministic move enumeration for the standardization search."""
    for vid in g.sorted_ids():
        if is_superfluous(g, vid):
            yield ("blowdown", vid)
    for vid in g.sorted_ids():
        v = g.vertices[vid]
        if v.weight == 0 and v.genus == 0 and v.boundary == 0:
            if branching_number(g, vid) == 2 and len(g.neighbors(vid)) == 2:
                for n in g.neighbors(vid):
                    yield ("flow", vid, n)
    for e in g.edges:
        yield ("inner", e.u, e.v)
    for vid in g.sorted_ids():
        yield ("outer", vid)


def _apply_move(g: WeightedGraph, move, log: list) -> WeightedGraph:
    if move[0] == "blowdown":
        return blow_down(g, move[1], log)
    if move[0] == "flow":
        return elementary_flow(g, move[1], move[2], log)
    if move[0] == "inner":
        return blow_up(g, OnEdge(move[1], move[2]), log)
    if move[0] == "outer":
        return blow_up(g, OnVertex(move[1]), log)
    raise AssertionError(f"unknown search move {move!r}")


def standardize(g: WeightedGraph) -> tuple[WeightedGraph, list]:
    """snc-minimalize, then search for a standard form by breadth-first
    exploration of contractions, flows and bounded blowups.

    The search caps vertex count and weights near the input's own size,
    uses canonical encodings to prune revisits, and gives up loudly
    after a fixed move budget (a strategy failure, never a proof that no
    standard form exists).
    """
    _require_divisor(g, "standardize")
    log: list = []
    cur = _minimalize(g, log, lambda _g, vid: vid)
    if is_standard(cur).standard:
        return cur, log

    caps = _SearchCaps(cur)
    seen = {canonical_encoding(cur)}
    queue = deque([(cur, tuple(log))])
    expansions = 0
    while queue:
        state, state_log = queue.popleft()
        for move in _search_moves(state):
            expansions += 1
            if expansions > caps.budget:
                raise DomainError(
                    "standardize: move budget exhausted "
                    "(strategy: minimalize, then BFS over blowdowns, flows "
                    "and bounded blowups); this indicates a strategy gap, "
                    "not a certified negative"
                )
            sub: list = []
            try:
                nxt = _apply_move(state, move, sub)
            except DomainError:
                continue
            if not caps.admits(nxt):
                continue
            enc = canonical_encoding(nxt)
            if enc in seen:
                continue
            seen.add(enc)
            nxt_log = state_log + tuple(sub)
            if is_standard(nxt).standard:
                return nxt, list(nxt_log)
            queue.append((nxt, nxt_log))
    raise DomainError(
        "standardize: search space exhausted under caps "
        "(strategy: minimalize, then BFS over blowdowns, flows and bounded "
        "blowups); this indicates a strategy gap, not a certified negative"
    )


# ---------------------------------------------------------------------------
# barks and half-point attachments


def bark(g: WeightedGraph, twig: list) -> dict:
    """Solve (intersection matrix of the twig) . c = (-1, 0, ..., 0),
    the -1 sitting at the free tip (first vertex of the tip-first list).

    Coefficients come back as exact Fractions, strictly between 0 and 1.
    """
    if not twig:
        raise DomainError("bark: twig must be non-empty")
    if len(set(twig)) != len(twig):
        raise DomainError("bark: repeated vertex in twig")
    for vid in twig:
        if vid not in g.vertices:
            raise DomainError(f"bark: vertex {vid!r} not found")
        v = g.vertices[vid]
        if v.genus != 0 or v.boundary != 0:
            raise DomainError(f"bark: twig vertex {vid!r} must be rational")
        if v.weight > -2:
            raise DomainError(
                f"bark: twig vertex {vid!r} has weight {v.weight} > -2; "
                "twig not admissible"
            )
    adj = {
        (min(e.u, e.v), max(e.u, e.v))
        for e in g.edges
        if not e.is_loop
    }
    for a, b in zip(twig, twig[1:]):
        if (min(a, b), max(a, b)) not in adj:
            raise DomainError(f"bark: {a!r} and {b!r} are not adjacent")
    tip = twig[0]
    tip_inside = [n for n in g.neighbors(tip) if n in twig]
    if len(twig) > 1 and tip_inside != [twig[1]]:
        raise DomainError("bark: twig must be listed tip first")

    n = len(twig)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i, vid in enumerate(twig):
        m[i][i] = Fraction(g.vertices[vid].weight)
        if i + 1 < n:
            m[i][i + 1] = Fraction(1)
            m[i + 1][i] = Fraction(1)
    rhs = [Fraction(-1)] + [Fraction(0)] * (n - 1)
    sol = _solve_exact(m, rhs)
    if sol is None:
        raise AssertionError("bark: singular system on an admissible twig")
    out = {}
    for vid, c in zip(twig, sol):
        if not (0 < c < 1):
            raise AssertionError(
                f"bark: coefficient {c} of {vid!r} not strictly between 0 and 1"
            )
        out[vid] = c
    return out


def _solve_exact(m, rhs):
    n = len(m)
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def d_sharp_coefficients(g: WeightedGraph) -> dict:
    """1 - bark on the maximal admissible tip-first prefix of every twig,
    1 on every other vertex."""
    _require_divisor(g, "d_sharp_coefficients")
    if len(connected_components(g)) != 1:
        raise DomainError("d_sharp_coefficients: graph must be connected")
    if not is_snc_minimal(g):
        raise DomainError("d_sharp_coefficients: graph must be snc-minimal")
    if is_negative_definite(g):
        raise DomainError(
            "d_sharp_coefficients: intersection form is negative definite"
        )
    coeffs = {vid: Fraction(1) for vid in g.vertices}
    for seg in classify_segments(g).segments:
        if not seg.is_twig:
            continue
        prefix = []
        for vid, entry in zip(seg.vertices, seg.chain_type.entries):
            if entry < 2:
                break
            prefix.append(vid)
        if not prefix:
            continue
        for vid, c in bark(g, prefix).items():
            coeffs[vid] = 1 - c
    return coeffs


def half_point_attach(g: WeightedGraph, a: str) -> tuple[WeightedGraph, list]:
    """Contract the (-1)-vertex a (which must meet the rest of the graph
    exactly once), then snc-minimalize.

    The minimalization prefers contracting vertices none of whose
    neighbors are branching, so a cascade running down a (-2)-twig eats
    the twig rather than turning toward the branch point.
    """
    _require_divisor(g, "half_point_attach")
    if a not in g.vertices:
        raise DomainError(f"half_point_attach: vertex {a!r} not found")
    v = g.vertices[a]
    if v.weight != -1:
        raise DomainError(f"half_point_attach: weight of {a!r} is {v.weight}, not -1")
    if v.genus != 0:
        raise DomainError(f"half_point_attach: {a!r} must be rational")
    if branching_number(g, a) != 1:
        raise DomainError(
            f"half_point_attach: {a!r} must meet the rest of the graph exactly once"
        )
    log: list = []
    cur = blow_down(g, a, log)

    def key(h: WeightedGraph, vid: str):
        b = branching_set(h)
        near_branch = any(n in b for n in h.neighbors(vid))
        return (near_branch, vid)

    return _minimalize(cur, log, key), log


# ---------------------------------------------------------------------------
# replay


def replay(g: WeightedGraph, log: list) -> WeightedGraph:
    """Apply a recorded move list to the graph it was recorded from."""
    cur = g
    for entry in log:
        if not isinstance(entry, dict) or "move" not in entry:
            raise DomainError(f"replay: malformed log entry {entry!r}")
        kind = entry["move"]
        if kind == "blowup":
            center = entry.get("center", {})
            if "vertex" in center:
                cur = blow_up(cur, OnVertex(center["vertex"]),
                              new_id=entry.get("new_id"))
            elif "edge" in center:
                u, v = center["edge"]
                cur = blow_up(cur, OnEdge(u, v), new_id=entry.get("new_id"))
            else:
                raise DomainError(f"replay: malformed blowup center {center!r}")
        elif kind == "blowdown":
            cur = blow_down(cur, entry["vertex"])
        elif kind == "flow":
            cur = elementary_flow(cur, entry["vertex"], entry["toward"])
        else:
            raise DomainError(f"replay: unknown move {kind!r}")
    return cur
