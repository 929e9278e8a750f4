"""The two-parameter family of boundary divisor graphs and its exact
coordinate-chart checks.

The surface S is carved out of C^4 by

    y_1 x_1^{d_1} = x_2 - phat_1(x_1),    y_2 x_2^{d_2} = x_1 - phat_2(x_2),

where p_j is a monic polynomial of degree d_j - 1 (coefficients stored
ascending, so d_j = len(coeffs)) and phat_j(t) = t^{d_j-1} p_j(1/t) is
its reversal, normalized by phat_j(0) = 1.

The boundary graph lives on a 4-cycle of lines

    L1_inf -- L2_inf -- L1_0 -- L2_0 -- L1_inf

with weights (0, 0, -1, -1) after the d_1 + d_2 blowups, a twig
[(2)_{d_j-1}] hanging off L_{j,0} (vertices T{j}_01 ... adjacent to
L{j}_0 first), and the last exceptional A_j at the twig's far end.  The
A_j are not part of the boundary; d_part() drops them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import divisor
from .graphs import (
    DomainError,
    Edge,
    Vertex,
    WeightedGraph,
    det_exact,
    intersection_matrix,
)


@dataclass(frozen=True)
class FamilyParams:
    """Coefficients of p_1 and p_2, ascending, monic; d_j = len."""

    p1: tuple
    p2: tuple

    def __post_init__(self):
        for name, coeffs in (("p1", self.p1), ("p2", self.p2)):
            if not coeffs:
                raise DomainError(f"{name} must have at least one coefficient")
            vals = tuple(Fraction(c) for c in coeffs)
            if vals[-1] != 1:
                raise DomainError(f"{name} must be monic (leading coefficient 1)")
            object.__setattr__(self, name, vals)

    @property
    def d1(self) -> int:
        return len(self.p1)

    @property
    def d2(self) -> int:
        return len(self.p2)

    @staticmethod
    def default(d1: int, d2: int) -> "FamilyParams":
        if d1 < 1 or d2 < 1:
            raise DomainError("degrees must be >= 1")
        mono = lambda d: tuple([Fraction(0)] * (d - 1) + [Fraction(1)])
        return FamilyParams(mono(d1), mono(d2))

    def phat(self, j: int) -> tuple:
        # ascending coefficients of phat_j = reversal of p_j
        p = self.p1 if j == 1 else self.p2
        return tuple(reversed(p))


@dataclass(frozen=True)
class LabeledFamilyGraph:
    graph: WeightedGraph
    d1: int
    d2: int

    def d_part_ids(self) -> list:
        return [vid for vid in self.graph.sorted_ids() if not vid.startswith("A")]

    def d_part(self) -> WeightedGraph:
        keep = set(self.d_part_ids())
        vs = [v for vid, v in self.graph.vertices.items() if vid in keep]
        es = [e for e in self.graph.edges if e.u in keep and e.v in keep]
        return WeightedGraph("divisor", vs, es)


def _tid(j: int, i: int) -> str:
    return f"T{j}_{i:02d}"


def build_boundary_graph(d1: int, d2: int) -> LabeledFamilyGraph:
    """Direct description of the blown-up boundary plus the two
    attachment curves A1, A2."""
    if d1 < 1 or d2 < 1:
        raise DomainError("degrees must be >= 1")
    vs = [
        Vertex("L1_inf", 0, label="L_{1,inf}"),
        Vertex("L2_inf", 0, label="L_{2,inf}"),
        Vertex("L1_0", -1, label="L_{1,0}"),
        Vertex("L2_0", -1, label="L_{2,0}"),
    ]
    es = [
        Edge("L1_inf", "L2_inf"),
        Edge("L2_inf", "L1_0"),
        Edge("L1_0", "L2_0"),
        Edge("L2_0", "L1_inf"),
    ]
    for j, d in ((1, d1), (2, d2)):
        prev = f"L{j}_0"
        for i in range(1, d):
            vs.append(Vertex(_tid(j, i), -2, label=f"T_{{{j},{i}}}"))
            es.append(Edge(prev, _tid(j, i)))
            prev = _tid(j, i)
        vs.append(Vertex(f"A{j}", -1, label=f"A_{j}"))
        es.append(Edge(prev, f"A{j}"))
    return LabeledFamilyGraph(WeightedGraph("divisor", vs, es), d1, d2)


def build_by_blowups(params: FamilyParams) -> tuple[LabeledFamilyGraph, list]:
    """Replay the construction: the 4-cycle of lines with all weights 0,
    then d_j outer blowups over L_{j,0} (each after the first sitting on
    the previous exceptional)."""
    vs = [
        Vertex("L1_inf", 0, label="L_{1,inf}"),
        Vertex("L2_inf", 0, label="L_{2,inf}"),
        Vertex("L1_0", 0, label="L_{1,0}"),
        Vertex("L2_0", 0, label="L_{2,0}"),
    ]
    es = [
        Edge("L1_inf", "L2_inf"),
        Edge("L2_inf", "L1_0"),
        Edge("L1_0", "L2_0"),
        Edge("L2_0", "L1_inf"),
    ]
    g = WeightedGraph("divisor", vs, es)
    log: list = []
    for j, d in ((1, params.d1), (2, params.d2)):
        prev = f"L{j}_0"
        for i in range(1, d + 1):
            new_id = f"A{j}" if i == d else _tid(j, i)
            g = divisor.blow_up(g, divisor.OnVertex(prev), log, new_id=new_id)
            prev = new_id
    # restore the curve-name labels lost on exceptional vertices
    relabel = []
    for vid, v in g.vertices.items():
        if v.label is None:
            if vid.startswith("A"):
                label = f"A_{vid[1]}"
            else:
                j, i = vid[1], int(vid.split("_")[1])
                label = f"T_{{{j},{i}}}"
            relabel.append(Vertex(vid, v.weight, v.genus, v.boundary, label))
    for v in relabel:
        g.replace_vertex(v)
    return LabeledFamilyGraph(g, params.d1, params.d2), log


def standardize_mixed(fam: LabeledFamilyGraph) -> tuple[WeightedGraph, list]:
    """Extra move script for the mixed case (exactly one d_j = 1).

    The boundary D-part of a mixed graph is not snc-minimal in a useful
    way for the standardness check, so the script rebuilds it: one inner
    blowup on the L1_inf--L2_inf edge, then contraction of L_{j,0} and
    L_{j,inf} on the degree-1 side, in that order.  The result is the
    (0, 0, +1) triangle with the [(2)_{d-1}] twig hanging off the +1
    vertex, which is standard.
    """
    if (fam.d1 == 1) == (fam.d2 == 1):
        raise DomainError(
            "standardize_mixed: need exactly one of d1, d2 equal to 1,"
            f" got ({fam.d1}, {fam.d2})"
        )
    j = 1 if fam.d1 == 1 else 2
    log: list = []
    g = fam.d_part()
    g = divisor.blow_up(g, divisor.OnEdge("L1_inf", "L2_inf"), log)
    g = divisor.blow_down(g, f"L{j}_0", log)
    g = divisor.blow_down(g, f"L{j}_inf", log)
    return g, log


# ---------------------------------------------------------------------------
# Picard checks


def picard_check(d1: int, d2: int) -> dict:
    """Unimodularity of the boundary intersection form plus the two
    linear-equivalence relations of the construction.

    R_j = A_j + sum_i T_{j,i} + L_{j,0} - L_{j,inf} pairs to zero with
    every curve; the fiber class C_j = R_j + L_{j,inf} squares to zero
    and meets exactly the two sections L_{3-j,0}, L_{3-j,inf}, once each.
    """
    fam = build_boundary_graph(d1, d2)
    g = fam.graph
    ids = g.sorted_ids()
    index = {vid: i for i, vid in enumerate(ids)}
    m = intersection_matrix(g)

    d_ids = fam.d_part_ids()
    d_det = det_exact(intersection_matrix(g, d_ids))
    unimodular = abs(d_det) == 1

    def mul(vec):
        return [sum(m[r][c] * vec[c] for c in range(len(ids))) for r in range(len(ids))]

    relations_ok = True
    for j, d in ((1, d1), (2, d2)):
        r = [0] * len(ids)
        r[index[f"A{j}"]] = 1
        for i in range(1, d):
            r[index[_tid(j, i)]] = 1
        r[index[f"L{j}_0"]] = 1
        r[index[f"L{j}_inf"]] = -1
        if any(x != 0 for x in mul(r)):
            relations_ok = False
        c = list(r)
        c[index[f"L{j}_inf"]] = 0
        pairing = mul(c)
        expect_one = {f"L{3-j}_0", f"L{3-j}_inf"}
        for vid in ids:
            want = 1 if vid in expect_one else 0
            if pairing[index[vid]] != want:
                relations_ok = False
        if sum(pairing[index[vid]] * c[index[vid]] for vid in ids) != 0:
            relations_ok = False

    return {
        "unimodular": unimodular,
        "det": int(d_det),
        "relations_verified": relations_ok,
    }


def surface_homology(d1: int, d2: int) -> dict:
    """Integral homology of the surface from its handle decomposition."""
    from . import invariants

    hd = invariants.kirby_handle_data(d1, d2)
    h0, h1, h2 = invariants.chain_complex_homology(hd)
    chi = hd.euler_characteristic()
    return {"chi": chi, "H0": h0, "H1": h1, "H2": h2}


# ---------------------------------------------------------------------------
# exact Laurent arithmetic in two variables


class LaurentPoly2:
    """Laurent polynomial in v1, v2 with Fraction coefficients, stored as
    {(e1, e2): coeff} with zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[exp] = c

    @staticmethod
    def const(c) -> "LaurentPoly2":
        return LaurentPoly2({(0, 0): Fraction(c)})

    @staticmethod
    def monomial(e1: int, e2: int, c=1) -> "LaurentPoly2":
        return LaurentPoly2({(e1, e2): Fraction(c)})

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return LaurentPoly2(out)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __neg__(self):
        return LaurentPoly2({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        other = _coerce(other)
        out: dict = {}
        for (a1, a2), ca in self.terms.items():
            for (b1, b2), cb in other.terms.items():
                key = (a1 + b1, a2 + b2)
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return LaurentPoly2(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return _coerce(other) - self

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("LaurentPoly2 powers must be >= 0; invert monomials directly")
        out = LaurentPoly2.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return self.terms == _coerce(other).terms

    def is_zero(self) -> bool:
        return not self.terms

    def derivative(self, var: int) -> "LaurentPoly2":
        out = {}
        for (e1, e2), c in self.terms.items():
            if var == 1 and e1:
                out[(e1 - 1, e2)] = out.get((e1 - 1, e2), Fraction(0)) + c * e1
            if var == 2 and e2:
                out[(e1, e2 - 1)] = out.get((e1, e2 - 1), Fraction(0)) + c * e2
        return LaurentPoly2(out)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (e1, e2), c in sorted(self.terms.items()):
            s = "" if c == 1 and (e1, e2) != (0, 0) else str(c)
            for name, e in (("v1", e1), ("v2", e2)):
                if e:
                    s += ("*" if s else "") + (name if e == 1 else f"{name}^{e}")
            bits.append(s or "1")
        return " + ".join(bits)

    __repr__ = __str__


def _coerce(x) -> LaurentPoly2:
    if isinstance(x, LaurentPoly2):
        return x
    return LaurentPoly2.const(x)


V1 = LaurentPoly2.monomial(1, 0)
V2 = LaurentPoly2.monomial(0, 1)
V1_INV = LaurentPoly2.monomial(-1, 0)
V2_INV = LaurentPoly2.monomial(0, -1)


def _poly_at(coeffs, arg: LaurentPoly2) -> LaurentPoly2:
    """Evaluate an ascending-coefficient polynomial at a Laurent value."""
    out = LaurentPoly2.const(0)
    power = LaurentPoly2.const(1)
    for c in coeffs:
        out = out + power * c
        power = power * arg
    return out


# ---------------------------------------------------------------------------
# charts


CHART_CASES = ("aa", "al1", "al2", "lc1", "lc2")


def _chart_sigma(case: str, params: FamilyParams) -> dict:
    """The four coordinate images sigma(x1), sigma(x2), sigma(y1),
    sigma(y2) as Laurent polynomials in the chart coordinates v1, v2."""
    if case not in CHART_CASES:
        raise DomainError(f"unknown chart case {case!r}; choose from {CHART_CASES}")
    d = {1: params.d1, 2: params.d2}
    ph = {1: params.phat(1), 2: params.phat(2)}
    v = {1: V1, 2: V2}
    vinv = {1: V1_INV, 2: V2_INV}

    if case == "aa":
        sig = {}
        for j in (1, 2):
            k = 3 - j
            sig[f"x{j}"] = v[j]
            sig[f"y{j}"] = (v[k] - _poly_at(ph[j], v[j])) * vinv[j] ** d[j]
        return sig

    if case in ("al1", "al2"):
        j = int(case[2])
        k = 3 - j
        if d[k] != 1:
            raise DomainError(
                f"chart {case} requires p_{k} = 1 (degree parameter d{k} = 1), "
                f"got d{k} = {d[k]}"
            )
        sig = {
            f"x{j}": v[j],
            f"x{k}": (v[j] - 1) * vinv[k],
            f"y{j}": (v[j] - 1 - _poly_at(ph[j], v[j]) * v[k])
            * (vinv[j] ** d[j] * vinv[k]),
            f"y{k}": v[k],
        }
        return sig

    j = int(case[2])
    k = 3 - j
    if d[1] != 1 or d[2] != 1:
        raise DomainError(
            f"chart {case} requires p_1 = p_2 = 1, got degrees ({d[1]}, {d[2]})"
        )
    return {
        f"x{j}": -(V2 + 1) * V1_INV,
        f"x{k}": -(V1 + V2 + 1) * (V1_INV * V2_INV),
        f"y{j}": (V1 + 1) * V2_INV,
        f"y{k}": V2,
    }


@dataclass(frozen=True)
class ChartReport:
    case: str
    residuals_zero: bool
    inverse_ok: bool
    residuals: tuple

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "residuals_zero": self.residuals_zero,
            "inverse_ok": self.inverse_ok,
            "residuals": [str(r) for r in self.residuals],
        }


def verify_chart(case: str, params: FamilyParams) -> ChartReport:
    """Substitute the chart's coordinate images into both defining
    equations; the residuals must vanish identically, and the inverse
    expressions must recover the chart coordinates."""
    sig = _chart_sigma(case, params)
    residuals = []
    for j in (1, 2):
        k = 3 - j
        d_j = params.d1 if j == 1 else params.d2
        g_j = (
            sig[f"y{j}"] * sig[f"x{j}"] ** d_j
            - sig[f"x{k}"]
            + _poly_at(params.phat(j), sig[f"x{j}"])
        )
        residuals.append(g_j)
    residuals_zero = all(r.is_zero() for r in residuals)

    if case == "aa":
        inverse_ok = sig["x1"] == V1 and sig["x2"] == V2
    elif case in ("al1", "al2"):
        j = int(case[2])
        k = 3 - j
        inverse_ok = (
            sig[f"x{j}"] == (V1 if j == 1 else V2)
            and sig[f"y{k}"] == (V1 if k == 1 else V2)
        )
    else:
        k = 3 - int(case[2])
        inverse_ok = (sig["y1"] * sig["y2"] - 1) == V1 and sig[f"y{k}"] == V2
    return ChartReport(case, residuals_zero, inverse_ok, tuple(residuals))


@dataclass(frozen=True)
class VolumeReport:
    case: str
    extends: bool
    sign: int

    def to_json_dict(self) -> dict:
        return {"case": self.case, "extends": self.extends, "sign": self.sign}


def verify_volume_form(case: str, params: FamilyParams) -> VolumeReport:
    """Check that dx1/x1 ^ dx2/x2 pulls back to +/- dv1/v1 ^ dv2/v2:
    det(Jacobian of (sigma(x1), sigma(x2))) * v1 * v2 must equal
    +/- sigma(x1) * sigma(x2) identically."""
    sig = _chart_sigma(case, params)
    x1, x2 = sig["x1"], sig["x2"]
    det = x1.derivative(1) * x2.derivative(2) - x1.derivative(2) * x2.derivative(1)
    lhs = det * V1 * V2
    for sign in (1, -1):
        if lhs == x1 * x2 * sign:
            return VolumeReport(case, True, sign)
    return VolumeReport(case, False, 0)
