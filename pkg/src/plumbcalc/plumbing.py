"""Plumbing calculus on signed graphs of 3-manifolds.

Moves implemented: R1 (blow-down of a +-1 vertex) and R3 (absorption of a
0-weighted beta=2 vertex).  normalize() drives them to a fixed point and
either certifies a normal form or recognizes one of the two small Seifert
graphs that need a special normal form; everything else fails loudly.

Conventions used throughout:
- kind="plumbing" graphs; vertex weight is the Euler number, edges carry
  signs +-1.  Sign data only matters on cycles; flip_vertex_signs is the
  gauge move that makes this precise.
- Type notation entries are negated weights: the chain [2,2] has two
  vertices of weight -2, ((2)_k) is a cycle of k such vertices.
- Negative continued fractions: p/q = a1 - 1/(a2 - 1/(...)), a_i >= 2.
- H1 of the plumbed manifold is Z^b1(graph) + coker(intersection matrix),
  where a loop at v adds 2*sign to v's diagonal entry.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .graphs import (
    AbelianGroup,
    ChainType,
    DomainError,
    Edge,
    OutOfScopeError,
    Vertex,
    WeightedGraph,
    branching_number,
    canonical_ordering,
    classify_segments,
    cokernel,
    connected_components,
    first_betti,
    intersection_matrix,
)
from .divisor import fresh_id

MOVE_BUDGET = 10_000


def _require_plumbing(g: WeightedGraph, op: str) -> None:
    if g.kind != "plumbing":
        raise DomainError(f"{op} needs a plumbing graph, got kind={g.kind!r}")


def _require_rational(g: WeightedGraph, op: str) -> None:
    for v in g.vertices.values():
        if v.genus != 0:
            raise OutOfScopeError(
                f"{op}: vertex {v.id!r} has genus {v.genus}; only rational"
                " (genus-0) graphs are supported"
            )


def from_divisor_graph(g: WeightedGraph) -> WeightedGraph:
    """Reinterpret a divisor dual graph as a plumbing graph.

    The boundary 3-manifold of a tubular neighborhood of the divisor is
    plumbed according to the same graph with every edge sign +1.
    """
    if g.kind != "divisor":
        raise DomainError("from_divisor_graph needs a divisor graph")
    return WeightedGraph("plumbing", list(g.vertices.values()), list(g.edges))


# -- moves -------------------------------------------------------------------


def move_R1(g: WeightedGraph, vid: str, log: list | None = None) -> WeightedGraph:
    """Blow down a rational vertex of weight +-1 with beta <= 2, no loop.

    Each neighbor loses eps = weight(v) from its weight (once per edge).
    With two edges to distinct neighbors u, w the blow-down joins them by
    a new edge of sign -eps*s1*s2; with two edges to the same neighbor u
    the result is a loop at u with that sign and u loses 2*eps.
    """
    _require_plumbing(g, "move_R1")
    if vid not in g.vertices:
        raise DomainError(f"no vertex {vid!r}")
    v = g.vertices[vid]
    if v.genus != 0 or v.boundary != 0:
        raise DomainError(f"move_R1: vertex {vid!r} must be rational and closed")
    if v.weight not in (1, -1):
        raise DomainError(f"move_R1: vertex {vid!r} has weight {v.weight}, need +-1")
    at = g.edges_at(vid)
    if any(e.is_loop for e in at):
        raise DomainError(f"move_R1: vertex {vid!r} carries a loop")
    if len(at) > 2:
        raise DomainError(f"move_R1: vertex {vid!r} has beta={len(at)} > 2")
    eps = v.weight

    vertices = [w for w in g.vertices.values() if w.id != vid]
    edges = [e for e in g.edges if vid not in (e.u, e.v)]
    adjust: dict[str, int] = {}
    for e in at:
        other = e.other(vid)
        adjust[other] = adjust.get(other, 0) - eps
    vertices = [
        Vertex(w.id, w.weight + adjust.get(w.id, 0), w.genus, w.boundary, w.label)
        for w in vertices
    ]
    if len(at) == 2:
        s = -eps * at[0].sign * at[1].sign
        u, w = at[0].other(vid), at[1].other(vid)
        edges.append(Edge(u, w, s))
    out = WeightedGraph("plumbing", vertices, edges)
    if log is not None:
        log.append({"move": "R1", "vertex": vid})
    return out


def move_R3(g: WeightedGraph, vid: str, log: list | None = None) -> WeightedGraph:
    """Absorb a rational 0-vertex of beta = 2 joining distinct vertices.

    The two neighbors u != w merge into one vertex (the smaller id is
    kept) with weights, genus and boundary added, inheriting all other
    edges of both.  Sign bookkeeping: when the product of the two removed
    edge signs is +1, every edge end formerly at the discarded vertex has
    its sign flipped; equivalently each inherited edge end is multiplied
    by -s1*s2.  A loop at the discarded vertex is hit twice and keeps its
    sign; a u-w edge becomes a loop at the merged vertex.

    A 0-vertex whose two edges reach the same vertex (or itself) is a
    self-absorption: it encodes an S^1 x S^2-like piece whose reduction
    needs moves outside this module, so it is rejected.
    """
    _require_plumbing(g, "move_R3")
    if vid not in g.vertices:
        raise DomainError(f"no vertex {vid!r}")
    v = g.vertices[vid]
    if v.genus != 0 or v.boundary != 0:
        raise DomainError(f"move_R3: vertex {vid!r} must be rational and closed")
    if v.weight != 0:
        raise DomainError(f"move_R3: vertex {vid!r} has weight {v.weight}, need 0")
    at = g.edges_at(vid)
    if any(e.is_loop for e in at):
        raise DomainError(
            f"move_R3: vertex {vid!r} carries a loop (self-absorption is"
            " out of scope for this move)"
        )
    if len(at) != 2:
        raise DomainError(f"move_R3: vertex {vid!r} has beta={len(at)}, need 2")
    u, w = at[0].other(vid), at[1].other(vid)
    if u == w:
        raise DomainError(
            f"move_R3: both edges of {vid!r} reach {u!r}; absorbing would"
            " pinch off an S^1 x S^2-like piece, which this calculus does"
            " not model -- rejected"
        )
    keep, drop = (u, w) if u < w else (w, u)
    mult = -at[0].sign * at[1].sign  # applied per edge end at the dropped vertex

    ku, kw = g.vertices[keep], g.vertices[drop]
    merged = Vertex(
        keep,
        ku.weight + kw.weight,
        ku.genus + kw.genus,
        ku.boundary + kw.boundary,
        ku.label,
    )
    vertices = [merged] + [
        x for x in g.vertices.values() if x.id not in (vid, keep, drop)
    ]
    edges = []
    for e in g.edges:
        if vid in (e.u, e.v):
            continue
        a, b, s = e.u, e.v, e.sign
        if a == drop:
            a, s = keep, s * mult
        if b == drop:
            b, s = keep, s * mult
        edges.append(Edge(a, b, s))
    out = WeightedGraph("plumbing", vertices, edges)
    if log is not None:
        log.append({"move": "R3", "vertex": vid})
    return out


def inverse_R1_on_vertex(
    g: WeightedGraph, vid: str, eps: int, sign: int = 1, new_id: str | None = None
) -> WeightedGraph:
    """Attach a pendant eps-vertex to vid and add eps to vid's weight.

    move_R1 on the new vertex undoes this exactly, so the plumbed
    manifold is unchanged.
    """
    _require_plumbing(g, "inverse_R1_on_vertex")
    if vid not in g.vertices:
        raise DomainError(f"no vertex {vid!r}")
    if eps not in (1, -1):
        raise DomainError("eps must be +-1")
    nid = new_id if new_id is not None else fresh_id(g)
    vertices = list(g.vertices.values()) + [Vertex(nid, eps)]
    out = WeightedGraph("plumbing", vertices, list(g.edges) + [Edge(vid, nid, sign)])
    out.add_weight(vid, eps)
    return out


def inverse_R1_on_edge(
    g: WeightedGraph, edge: Edge, eps: int, s1: int = 1, new_id: str | None = None
) -> WeightedGraph:
    """Subdivide an edge by an eps-vertex, adding eps to both endpoints.

    The two new signs satisfy -eps*s1*s2 = old sign, so move_R1 on the
    new vertex restores the input graph up to gauge.
    """
    _require_plumbing(g, "inverse_R1_on_edge")
    if edge not in g.edges:
        raise DomainError(f"no edge ({edge.u!r},{edge.v!r},{edge.sign:+d})")
    if edge.is_loop:
        raise DomainError("inverse_R1_on_edge does not subdivide loops")
    if eps not in (1, -1):
        raise DomainError("eps must be +-1")
    s2 = -eps * s1 * edge.sign
    nid = new_id if new_id is not None else fresh_id(g)
    edges = list(g.edges)
    edges.remove(edge)
    edges += [Edge(edge.u, nid, s1), Edge(nid, edge.v, s2)]
    vertices = list(g.vertices.values()) + [Vertex(nid, eps)]
    out = WeightedGraph("plumbing", vertices, edges)
    out.add_weight(edge.u, eps)
    out.add_weight(edge.v, eps)
    return out


# -- gauge -------------------------------------------------------------------


def flip_vertex_signs(g: WeightedGraph, vid: str) -> WeightedGraph:
    """Flip the sign of every non-loop edge end at vid (a gauge move).

    Loops are hit twice and keep their sign.  The plumbed manifold is
    unchanged; only the sign pattern on cycles is gauge-invariant.
    """
    _require_plumbing(g, "flip_vertex_signs")
    if vid not in g.vertices:
        raise DomainError(f"no vertex {vid!r}")
    edges = []
    for e in g.edges:
        if e.is_loop or vid not in (e.u, e.v):
            edges.append(e)
        else:
            edges.append(Edge(e.u, e.v, -e.sign))
    return WeightedGraph("plumbing", list(g.vertices.values()), edges)


def _is_minus_two_cycle(g: WeightedGraph) -> bool:
    """Is the graph the cyclic shape ((2)_k): connected, every vertex a
    rational closed -2 with beta = 2, first betti number 1?"""
    if not g.vertices or len(connected_components(g)) != 1:
        return False
    for vid, v in g.vertices.items():
        if v.weight != -2 or v.genus != 0 or v.boundary != 0:
            return False
        if branching_number(g, vid) != 2:
            return False
    return first_betti(g) == 1


def gauge_canonicalize(g: WeightedGraph) -> WeightedGraph:
    """Push edge signs into canonical position by vertex flips.

    A BFS spanning forest rooted at each component's smallest id gets all
    +1 tree edges; the surviving non-tree signs are the gauge-invariant
    cycle data.  One exception: on the cyclic all-(-2) shape ((2)_k) the
    normal-form convention wants at least two displayed "-" labels, so
    when the cycle product allows it the gauge is adjusted to show them
    (product +1: flip at the largest vertex; product -1 with k >= 3: flip
    at the largest vertex not on the negative edge).
    """
    _require_plumbing(g, "gauge_canonicalize")
    flip: dict[str, int] = {}
    for comp in connected_components(g):
        root = min(comp)
        flip[root] = 1
        queue = [root]
        while queue:
            cur = queue.pop(0)
            for e in g.edges_at(cur):
                if e.is_loop:
                    continue
                other = e.other(cur)
                if other not in flip:
                    flip[other] = flip[cur] * e.sign
                    queue.append(other)
    edges = []
    for e in g.edges:
        if e.is_loop:
            edges.append(e)
        else:
            edges.append(Edge(e.u, e.v, e.sign * flip[e.u] * flip[e.v]))
    out = WeightedGraph("plumbing", list(g.vertices.values()), edges)

    if _is_minus_two_cycle(out) and sum(1 for e in out.edges if e.sign < 0) < 2:
        negs = [e for e in out.edges if e.sign < 0]
        if not negs and len(out.vertices) >= 2:
            out = flip_vertex_signs(out, max(out.vertices))
        elif negs and len(out.vertices) >= 3:
            on_neg = {negs[0].u, negs[0].v}
            cands = [x for x in out.vertices if x not in on_neg]
            out = flip_vertex_signs(out, max(cands))
    return out


# -- normal form -------------------------------------------------------------


@dataclass(frozen=True)
class NormalReport:
    ok: bool
    violations: tuple

    def __bool__(self):
        return self.ok


def is_normal(g: WeightedGraph) -> NormalReport:
    """Check the three normal-form conditions.

    (1) every non-branching vertex (beta <= 2, loops counted twice) has
        weight <= -2; vertices with boundary are exempt since their
        weights can be traded for boundary twists;
    (2) a beta = 3 vertex meeting two twigs of type [2] forces the whole
        graph to be a fork (a tree with that single branching vertex);
    (3) the cyclic all-(-2) shape ((2)_k) must display at least two
        negative edge labels.

    Disconnected graphs are checked componentwise (a graph is normal when
    all its components are), reported as one violation list.
    """
    _require_plumbing(g, "is_normal")
    _require_rational(g, "is_normal")
    violations = []

    for vid in g.sorted_ids():
        v = g.vertices[vid]
        if v.boundary != 0:
            continue
        if branching_number(g, vid) <= 2 and v.weight > -2:
            violations.append(
                f"non-branching vertex {vid!r} has weight {v.weight} > -2"
            )

    report = classify_segments(g)
    for vid in g.sorted_ids():
        if branching_number(g, vid) != 3:
            continue
        small = [
            s
            for s in report.segments
            if s.is_twig
            and vid in s.attachments
            and s.chain_type.entries == (2,)
        ]
        if len(small) >= 2 and not _is_fork(g):
            violations.append(
                f"vertex {vid!r} meets two [2]-twigs but the graph is not a fork"
            )

    for comp in connected_components(g):
        sub = WeightedGraph(
            "plumbing",
            [g.vertices[x] for x in comp],
            [e for e in g.edges if e.u in comp],
        )
        if _is_minus_two_cycle(sub):
            neg = sum(1 for e in sub.edges if e.sign < 0)
            if neg < 2:
                violations.append(
                    f"all-(-2) cycle on {sorted(comp)} shows {neg} negative"
                    " edge(s), need at least 2"
                )

    return NormalReport(not violations, tuple(violations))


def _is_fork(g: WeightedGraph) -> bool:
    """One beta=3 vertex, no other branching, no cycles: a 3-pronged star."""
    if first_betti(g) != 0 or len(connected_components(g)) != 1:
        return False
    branching = [x for x in g.vertices if branching_number(g, x) >= 3]
    return len(branching) == 1 and branching_number(g, branching[0]) == 3


@dataclass(frozen=True)
class SeifertData:
    """Seifert fibration data (g, r; f_1, ..., f_k) plus an integer shift.

    Fibers are kept in [0,1) sorted ascending; central_weight collects
    the integer parts moved out of the fiber slopes, so orientation
    reversal negates every slope and renormalizes.  The convention is
    anchored so the flat Seifert space over the (2,3,6) orbifold displays
    as (0, 0; 1/2, 1/3, 1/6) with central_weight 0.
    """

    base_genus: int
    boundary_count: int
    exceptional: tuple
    central_weight: int

    def __post_init__(self):
        fixed = tuple(sorted(Fraction(f) for f in self.exceptional))
        object.__setattr__(self, "exceptional", fixed)
        for f in fixed:
            if not 0 <= f < 1:
                raise DomainError(f"fiber {f} not normalized into [0,1)")
        if self.boundary_count < 0:
            raise DomainError("negative boundary count")

    def to_json_dict(self) -> dict:
        return {
            "base_genus": self.base_genus,
            "boundary_count": self.boundary_count,
            "exceptional": [str(f) for f in self.exceptional],
            "central_weight": self.central_weight,
        }


def _reverse_seifert(sd: SeifertData) -> SeifertData:
    fibers = []
    central = -sd.central_weight
    for f in sd.exceptional:
        fl = math.floor(-f)
        fibers.append(-f - fl)
        central += fl
    if sd.boundary_count > 0:
        central = 0
    return SeifertData(sd.base_genus, sd.boundary_count, tuple(fibers), central)


@dataclass(frozen=True)
class NormalForm:
    """A terminal graph of the R1/R3 reduction with its certificate.

    certificate "generic": graph passes is_normal, ordering is the
    canonical vertex order.  certificate "seifert_special": the graph is
    one of the small Seifert graphs needing a special normal form, and
    seifert carries its fibration data.
    """

    graph: WeightedGraph
    ordering: tuple
    certificate: str
    seifert: SeifertData | None
    log: tuple

    def to_json_dict(self) -> dict:
        return {
            "graph": self.graph.to_json_dict(),
            "ordering": list(self.ordering),
            "certificate": self.certificate,
            "seifert": self.seifert.to_json_dict() if self.seifert else None,
            "log": list(self.log),
        }


# The two single-vertex-with-loop graphs left fixed by R1/R3 that carry a
# known Seifert fibration: the flat space over the (2,3,6) orbifold and
# its orientation reversal.
_SEIFERT_CATALOG = {
    (1, -1): SeifertData(0, 0, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)), 0),
    (-1, 1): SeifertData(0, 0, (Fraction(1, 2), Fraction(2, 3), Fraction(5, 6)), -3),
}


def _seifert_special(g: WeightedGraph) -> SeifertData | None:
    if len(g.vertices) != 1 or len(g.edges) != 1:
        return None
    (v,) = g.vertices.values()
    (e,) = g.edges
    if not e.is_loop or v.genus != 0 or v.boundary != 0:
        return None
    return _SEIFERT_CATALOG.get((v.weight, e.sign))


def _r1_candidates(g: WeightedGraph) -> list:
    out = []
    for vid in g.sorted_ids():
        v = g.vertices[vid]
        if v.weight not in (1, -1) or v.genus != 0 or v.boundary != 0:
            continue
        at = g.edges_at(vid)
        if len(at) <= 2 and not any(e.is_loop for e in at):
            out.append(vid)
    return out


def _r3_candidates(g: WeightedGraph) -> list:
    out = []
    for vid in g.sorted_ids():
        v = g.vertices[vid]
        if v.weight != 0 or v.genus != 0 or v.boundary != 0:
            continue
        at = g.edges_at(vid)
        if len(at) != 2 or any(e.is_loop for e in at):
            continue
        if at[0].other(vid) != at[1].other(vid):
            out.append(vid)
    return out


def normalize(g: WeightedGraph, budget: int = MOVE_BUDGET) -> NormalForm:
    """Reduce to a normal form, or fail loudly.

    Applies R1 then R3 (lowest eligible id first) until neither applies,
    canonicalizes the gauge, and checks is_normal.  Terminal graphs that
    fail it are matched against the small-Seifert catalog; anything else
    raises OutOfScopeError because finishing it needs plumbing moves this
    module does not implement (R2, R4-R6, R8, non-orientable handling).
    """
    if g.kind == "divisor":
        g = from_divisor_graph(g)
    _require_plumbing(g, "normalize")
    _require_rational(g, "normalize")
    if not g.vertices:
        raise DomainError("normalize: empty graph (S^3 has no plumbing vertex)")
    if len(connected_components(g)) != 1:
        raise DomainError("normalize: graph must be connected")

    log: list = []
    cur = g
    for _ in range(budget):
        r1 = _r1_candidates(cur)
        if r1:
            cur = move_R1(cur, r1[0], log)
            if not cur.vertices:
                # the manifold was S^3; its normal form is the empty graph
                return NormalForm(cur, (), "generic", None, tuple(log))
            continue
        r3 = _r3_candidates(cur)
        if r3:
            cur = move_R3(cur, r3[0], log)
            continue
        break
    else:
        raise DomainError(f"normalize: move budget {budget} exceeded")

    cur = gauge_canonicalize(cur)
    report = is_normal(cur)
    if report.ok:
        order = canonical_ordering(cur)
        return NormalForm(cur, order, "generic", None, tuple(log))

    sd = _seifert_special(cur)
    if sd is not None:
        return NormalForm(
            cur, tuple(cur.sorted_ids()), "seifert_special", sd, tuple(log)
        )

    raise OutOfScopeError(
        "normalize: terminal graph is not normal and is not a recognized"
        " special Seifert graph; finishing it needs plumbing moves outside"
        " the implemented R1/R3 subset (R2, R4-R6, R8 or non-orientable"
        f" handling). Violations: {list(report.violations)}"
    )


# -- orientation reversal ------------------------------------------------------


def _negate(g: WeightedGraph) -> WeightedGraph:
    vertices = [
        Vertex(v.id, -v.weight, v.genus, v.boundary, v.label)
        for v in g.vertices.values()
    ]
    edges = [Edge(e.u, e.v, -e.sign) for e in g.edges]
    return WeightedGraph("plumbing", vertices, edges)


def _dualize_positive_twigs(g: WeightedGraph, log: list) -> WeightedGraph:
    """Replace each maximal twig of all-(>= +2) weights by its dual chain.

    A pendant chain of weights (w_1..w_k) read outward from the
    attachment evaluates to p/q as a negative continued fraction; the
    reversed manifold carries the chain of p/(p-q) with negated weights
    instead, and the attachment vertex loses 1.  This composite is the
    R1-inverse cascade that absorbs the positive chain, so the plumbed
    manifold is unchanged.
    """
    report = classify_segments(g)
    cur = g
    for seg in report.segments:
        if not seg.is_twig:
            continue
        weights = [cur.vertices[x].weight for x in seg.vertices]
        if any(w < 2 for w in weights):
            continue
        att = seg.attachments[0] or seg.attachments[1]
        # seg.vertices is tip-first; read attachment-outward for the fraction
        outward = [int(w) for w in reversed(weights)]
        p, q = continued_fraction_eval(ChainType(tuple(outward)))
        dual = continued_fraction_expand(p, p - q) if p - q > 0 else None
        vertices = [v for v in cur.vertices.values() if v.id not in seg.vertices]
        edges = [
            e
            for e in cur.edges
            if e.u not in seg.vertices and e.v not in seg.vertices
        ]
        base = WeightedGraph("plumbing", vertices, edges)
        prev = att
        new_ids = []
        if dual is not None:
            for a in dual.entries:
                nid = fresh_id(base, "Z")
                base = WeightedGraph(
                    "plumbing",
                    list(base.vertices.values()) + [Vertex(nid, -a)],
                    list(base.edges) + [Edge(prev, nid, 1)],
                )
                prev = nid
                new_ids.append(nid)
        base.add_weight(att, -1)
        cur = base
        log.append(
            {
                "move": "chain_dual",
                "removed": list(seg.vertices),
                "added": new_ids,
                "attachment": att,
            }
        )
    return cur


def reverse_orientation(nf: NormalForm) -> NormalForm:
    """Normal form of the orientation-reversed manifold.

    Negates all weights and edge signs, trades each resulting positive
    pendant chain for its continued-fraction dual (decrementing the
    attachment), and re-normalizes.  H1 is asserted unchanged, since
    reversing orientation cannot alter homology.
    """
    if not isinstance(nf, NormalForm):
        raise DomainError("reverse_orientation takes a NormalForm")
    log: list = [{"move": "negate"}]
    flipped = _negate(nf.graph)
    if nf.certificate == "seifert_special":
        out = normalize(flipped)
        if nf.seifert is not None:
            expected = _reverse_seifert(nf.seifert)
            assert out.seifert == expected, (
                f"seifert reversal mismatch: {out.seifert} vs {expected}"
            )
        result = NormalForm(
            out.graph,
            out.ordering,
            out.certificate,
            out.seifert,
            tuple(log) + out.log,
        )
    else:
        dualized = _dualize_positive_twigs(flipped, log)
        out = normalize(dualized)
        result = NormalForm(
            out.graph,
            out.ordering,
            out.certificate,
            out.seifert,
            tuple(log) + out.log,
        )
    before = h1_from_graph(nf.graph)
    after = h1_from_graph(result.graph)
    assert before == after, f"H1 changed under reversal: {before} vs {after}"
    return result


# -- recognition ---------------------------------------------------------------


def is_prime(x) -> bool:
    """Connected nonempty normal graphs plumb prime manifolds.

    The empty graph is S^3, which by convention is not prime; a
    disconnected graph describes more than one piece.
    """
    g = x.graph if isinstance(x, NormalForm) else x
    _require_plumbing(g, "is_prime")
    if not g.vertices:
        return False
    return len(connected_components(g)) == 1


def is_lens_space(x):
    """(p, q) from the chain's negative continued fraction, or None.

    Accepts a NormalForm or a plumbing graph.  Rational chains (loop-free,
    branch-free, linear) plumb lens spaces; the empty graph gives (1, 0),
    i.e. S^3.  The fraction is reported raw, from the lexicographically
    smaller chain orientation: callers comparing lens classes must
    account for L(p,q) = L(p,q') when q*q' = 1 mod p.
    """
    g = x.graph if isinstance(x, NormalForm) else x
    _require_plumbing(g, "is_lens_space")
    _require_rational(g, "is_lens_space")
    if not g.vertices:
        return (1, 0)
    if len(connected_components(g)) != 1 or first_betti(g) != 0:
        return None
    if any(v.boundary != 0 for v in g.vertices.values()):
        return None
    if any(branching_number(g, x) > 2 for x in g.vertices):
        return None
    report = classify_segments(g)
    if len(report.segments) != 1 or report.branching:
        return None
    (seg,) = report.segments
    return continued_fraction_eval(seg.chain_type)


def continued_fraction_expand(p: int, q: int) -> ChainType:
    """Negative continued fraction of p/q with entries >= 2.

    Needs p > q >= 1 and gcd(p, q) = 1; p/q = a1 - 1/(a2 - 1/(...)).
    """
    if q < 1:
        raise DomainError(f"continued_fraction_expand: q={q} must be >= 1")
    if p <= q:
        raise DomainError(
            f"continued_fraction_expand: need p > q, got {p}/{q}"
            " (entries >= 2 force the value above 1)"
        )
    if math.gcd(p, q) != 1:
        raise DomainError(f"continued_fraction_expand: gcd({p},{q}) != 1")
    entries = []
    while q:
        a = -((-p) // q)  # ceil(p/q)
        entries.append(a)
        p, q = q, a * q - p
    return ChainType(tuple(entries))


def continued_fraction_eval(ct: ChainType) -> tuple:
    """Exact inverse of continued_fraction_expand; empty chain gives (1, 0)."""
    if ct.circular:
        raise DomainError("continued_fraction_eval takes a linear chain type")
    p, q = 1, 0
    for a in reversed(ct.entries):
        p, q = a * p - q, p
    return (p, q)


def seifert_from_star(g: WeightedGraph) -> SeifertData:
    """Read Seifert data off a star-shaped plumbing graph.

    The center is the unique branching vertex (or the only vertex).  Each
    maximal twig, read from the center outward, must be a chain of
    weights <= -2; its negative continued fraction p/q gives the fiber
    slope (p-q)/p.  The reading direction is unobservable on the
    palindromic all-(-2) twigs this package meets, and is documented
    here once: center outward.

    central_weight is the display shift: 0 when the base has boundary
    (twists absorb it), and weight(center) + #twigs - 1 for closed bases,
    the normalization that shows the flat (2,3,6) Seifert space as
    (0, 0; 1/2, 1/3, 1/6; 0).
    """
    _require_plumbing(g, "seifert_from_star")
    _require_rational(g, "seifert_from_star")
    if not g.vertices:
        raise DomainError("seifert_from_star: empty graph")
    if len(connected_components(g)) != 1:
        raise DomainError("seifert_from_star: graph must be connected")
    if first_betti(g) != 0:
        raise DomainError("seifert_from_star: graph has a cycle, not a star")
    branchers = [x for x in g.vertices if branching_number(g, x) >= 3]
    decorated = [x for x in g.vertices.values() if x.boundary != 0]
    if len(branchers) > 1:
        raise DomainError("seifert_from_star: more than one branching vertex")
    if branchers:
        center = branchers[0]
    elif len(decorated) == 1:
        center = decorated[0].id
    elif len(g.vertices) == 1:
        center = next(iter(g.vertices))
    else:
        raise DomainError(
            "seifert_from_star: no branching vertex; the center of a chain"
            " is ambiguous"
        )

    report = classify_segments(g)
    fibers = []
    for seg in report.segments:
        if seg.vertices == (center,):
            continue
        if not seg.is_twig or center not in seg.attachments:
            raise DomainError(
                f"seifert_from_star: segment {list(seg.vertices)} is not a"
                " twig at the center"
            )
        weights = [g.vertices[x].weight for x in seg.vertices]
        if any(w > -2 for w in weights):
            raise DomainError(
                f"seifert_from_star: twig {list(seg.vertices)} has weights"
                f" {weights}; fiber read-off needs all <= -2"
            )
        outward = tuple(-w for w in reversed(weights))  # center outward
        p, q = continued_fraction_eval(ChainType(outward))
        fibers.append(Fraction(p - q, p))

    c = g.vertices[center]
    if c.boundary > 0:
        central = 0
    else:
        central = c.weight + len(fibers) - 1 if fibers else c.weight
    return SeifertData(c.genus, c.boundary, tuple(fibers), central)


def jsj_cut(g) -> list:
    """Seifert pieces after cutting the plumbed manifold along its JSJ tori.

    Accepts a family-shaped graph (or NormalForm): after normalization the
    cycle is either the double edge between the two cores or a single
    loop; its edges are removed, each formerly-joined vertex gains 2
    boundary circles, and each resulting star is read off.  The special
    Seifert certificate is already a single fibered piece.  Pieces are
    sorted by fiber tuple.
    """
    nf = g if isinstance(g, NormalForm) else normalize(g)
    if nf.certificate == "seifert_special":
        return [nf.seifert]
    graph = nf.graph
    if first_betti(graph) != 1:
        raise OutOfScopeError(
            "jsj_cut: expected first betti number 1 (one cutting torus);"
            " general JSJ is not implemented"
        )
    loops = [e for e in graph.edges if e.is_loop]
    if loops:
        cut_edges = loops
    else:
        pair_count = Counter((e.u, e.v) for e in graph.edges)
        doubles = [pair for pair, n in pair_count.items() if n >= 2]
        if len(doubles) != 1 or pair_count[doubles[0]] != 2:
            raise OutOfScopeError(
                "jsj_cut: cycle is neither a loop nor a clean double edge;"
                " shape unrecognized"
            )
        cut_edges = [e for e in graph.edges if (e.u, e.v) == doubles[0]]

    touched: dict[str, int] = {}
    for e in cut_edges:
        touched[e.u] = touched.get(e.u, 0) + 1
        touched[e.v] = touched.get(e.v, 0) + 1
    vertices = []
    for v in graph.vertices.values():
        if v.id in touched:
            vertices.append(
                Vertex(v.id, v.weight, v.genus, v.boundary + touched[v.id], v.label)
            )
        else:
            vertices.append(v)
    edges = [e for e in graph.edges if e not in cut_edges]
    cut = WeightedGraph("plumbing", vertices, edges)

    pieces = []
    for comp in sorted(connected_components(cut), key=sorted):
        sub = WeightedGraph(
            "plumbing",
            [cut.vertices[x] for x in comp],
            [e for e in cut.edges if e.u in comp],
        )
        pieces.append(seifert_from_star(sub))
    return sorted(pieces, key=lambda sd: (sd.exceptional, sd.central_weight))


def h1_from_graph(g) -> AbelianGroup:
    """H1 of the plumbed 3-manifold: Z^b1(graph) + coker(intersection).

    Loops contribute 2*sign to the diagonal.  Validated against the fact
    that a 0-framed knot surgery has H1 = Z.
    """
    graph = g.graph if isinstance(g, NormalForm) else g
    _require_plumbing(graph, "h1_from_graph")
    _require_rational(graph, "h1_from_graph")
    if any(v.boundary != 0 for v in graph.vertices.values()):
        raise DomainError("h1_from_graph needs a closed manifold (boundary 0)")
    b1 = first_betti(graph)
    if not graph.vertices:
        return AbelianGroup(0, ())
    coker = cokernel(intersection_matrix(graph))
    return AbelianGroup(b1 + coker.rank, coker.torsion)
