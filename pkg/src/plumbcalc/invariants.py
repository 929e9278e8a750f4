"""Group-theoretic and knot-theoretic fingerprints of the boundary manifolds.

Contents: the fundamental-group-at-infinity presentation and its
abelianization, brute-force homomorphism counting into finite groups
given by multiplication tables, the handle-decomposition bookkeeping
(with homology of the handle chain complex), and the 2-bridge knot data
(fraction and Alexander polynomial) of the surgery description.

Conventions:
- Words are tuples of signed 1-based generator indices (+i = generator,
  -i = its inverse), freely reduced.
- Commutators are [a, b] = a b a^-1 b^-1.
- Finite groups are explicit multiplication tables with identity index 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .graphs import AbelianGroup, DomainError, cokernel, smith_normal_form

HOM_BUDGET = 10**8


def free_reduce(word) -> tuple:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _inv_word(word) -> tuple:
    return tuple(-x for x in reversed(word))


def _commutator(a, b) -> tuple:
    return tuple(a) + tuple(b) + _inv_word(a) + _inv_word(b)


@dataclass(frozen=True)
class GroupPresentation:
    """Finitely presented group: generator names plus relator words."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = tuple(free_reduce(r) for r in self.relators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)
        if rels and not gens:
            raise DomainError("relators given without generators")
        k = len(gens)
        for r in rels:
            for x in r:
                if x == 0 or abs(x) > k:
                    raise DomainError(f"relator letter {x} out of range 1..{k}")

    def exponent_matrix(self) -> list:
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows


def pi1_presentation(d1: int, d2: int) -> GroupPresentation:
    """Fundamental group at infinity of the (d1, d2) surface.

    <delta1, delta2, lambda | delta1 = [gamma2, lambda^-1],
                              delta2 = [gamma1, lambda],
                              [gamma1, gamma2] = 1>,
    with gamma_j = delta_j^d_j.  Generator indices: 1 = delta1,
    2 = delta2, 3 = lambda.  Each defining equation is stored as the
    relator (left side) * (right side)^-1.
    """
    if d1 < 1 or d2 < 1:
        raise DomainError(f"need d1, d2 >= 1, got ({d1}, {d2})")
    gamma1 = (1,) * d1
    gamma2 = (2,) * d2
    lam = (3,)
    r1 = (1,) + _inv_word(_commutator(gamma2, _inv_word(lam)))
    r2 = (2,) + _inv_word(_commutator(gamma1, lam))
    r3 = _commutator(gamma1, gamma2)
    return GroupPresentation(("delta1", "delta2", "lambda"), (r1, r2, r3))


def abelianization(p: GroupPresentation) -> AbelianGroup:
    """SNF of the relator exponent matrix."""
    if not p.generators:
        return AbelianGroup(0, ())
    if not p.relators:
        return AbelianGroup(len(p.generators), ())
    return cokernel(p.exponent_matrix(), ambient_rank=len(p.generators))


# -- finite groups as tables ---------------------------------------------------


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given by its multiplication table.

    table[a][b] is the product a*b; the identity has index 0.  The
    axioms are verified on construction, so downstream counting can
    trust the table blindly.
    """

    order: int
    table: tuple
    name: str = ""
    inverse: tuple = field(default=(), compare=False)

    def __post_init__(self):
        n = self.order
        if n < 1:
            raise DomainError("group order must be >= 1")
        if n**3 > 10**7:
            raise DomainError(f"refusing to verify a table of order {n}")
        tab = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", tab)
        if len(tab) != n or any(len(row) != n for row in tab):
            raise DomainError("table shape does not match order")
        for row in tab:
            for x in row:
                if not isinstance(x, int) or not 0 <= x < n:
                    raise DomainError(f"table entry {x!r} out of range")
        for a in range(n):
            if tab[0][a] != a or tab[a][0] != a:
                raise DomainError("index 0 is not an identity")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if tab[a][b] == 0:
                    inv[a] = b
        if any(x is None for x in inv):
            raise DomainError("missing inverses")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if tab[tab[a][b]][c] != tab[a][tab[b][c]]:
                        raise DomainError(
                            f"associativity fails at ({a},{b},{c})"
                        )
        object.__setattr__(self, "inverse", tuple(inv))

    @staticmethod
    def from_json_dict(data: dict) -> "FiniteGroupTable":
        extra = set(data) - {"order", "table", "name"}
        if extra:
            raise DomainError(f"unknown group-table fields {sorted(extra)}")
        if "order" not in data or "table" not in data:
            raise DomainError("group table needs 'order' and 'table'")
        return FiniteGroupTable(
            data["order"],
            tuple(tuple(row) for row in data["table"]),
            data.get("name", ""),
        )

    def to_json_dict(self) -> dict:
        out = {"order": self.order, "table": [list(r) for r in self.table]}
        if self.name:
            out["name"] = self.name
        return out


def cyclic_group(n: int) -> FiniteGroupTable:
    tab = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroupTable(n, tab, f"C{n}")


def dihedral_group(n: int) -> FiniteGroupTable:
    """Order 2n: elements s^e r^k with r^n = s^2 = 1, r s = s r^-1.

    Index = e*n + k.  dihedral_group(3) is the symmetric group on 3
    letters.
    """
    if n < 3:
        raise DomainError("dihedral_group needs n >= 3")

    def mul(x, y):
        e1, k1 = divmod(x, n)
        e2, k2 = divmod(y, n)
        k = (k2 + (k1 if e2 == 0 else -k1)) % n
        return ((e1 + e2) % 2) * n + k

    tab = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    return FiniteGroupTable(2 * n, tab, f"D{n}" if n != 3 else "S3")


def dicyclic_group(m: int) -> FiniteGroupTable:
    """Order 4m: a^2m = 1, x^2 = a^m, x a x^-1 = a^-1; index = e*2m + k
    for a^k x^e.  dicyclic_group(2) is the quaternion group Q8."""
    if m < 2:
        raise DomainError("dicyclic_group needs m >= 2")
    n = 2 * m

    def mul(x, y):
        e1, k1 = divmod(x, n)
        e2, k2 = divmod(y, n)
        k = (k2 + k1) % n if e1 == 0 else (k1 - k2) % n
        if e1 == 1 and e2 == 1:
            k = (k + m) % n
        return ((e1 + e2) % 2) * n + k

    tab = [[mul(a, b) for b in range(4 * m)] for a in range(4 * m)]
    return FiniteGroupTable(4 * m, tab, "Q8" if m == 2 else f"Dic{m}")


def alternating4_group() -> FiniteGroupTable:
    elems = sorted(p for p in permutations(range(4)) if _parity(p) == 0)
    idx = {p: i for i, p in enumerate(elems)}

    def mul(a, b):
        pa, pb = elems[a], elems[b]
        return idx[tuple(pa[pb[i]] for i in range(4))]

    tab = [[mul(a, b) for b in range(12)] for a in range(12)]
    return FiniteGroupTable(12, tab, "A4")


def _parity(p) -> int:
    inv = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return inv % 2


def direct_product(a: FiniteGroupTable, b: FiniteGroupTable) -> FiniteGroupTable:
    n, m = a.order, b.order

    def mul(x, y):
        xa, xb = divmod(x, m)
        ya, yb = divmod(y, m)
        return a.table[xa][ya] * m + b.table[xb][yb]

    tab = [[mul(x, y) for y in range(n * m)] for x in range(n * m)]
    name = f"{a.name}x{b.name}" if a.name and b.name else ""
    return FiniteGroupTable(n * m, tab, name)


def group_catalog() -> dict:
    """All groups of order <= 12, keyed by name.

    Orders 1..12 are completely classified; this builds every class:
    cyclic groups, the elementary products, the dihedral groups (D3 is
    named S3), Q8, Dic3 and A4.
    """
    cat = {}
    for n in range(1, 13):
        g = cyclic_group(n)
        cat[g.name] = g
    c2, c3, c4, c6 = (cyclic_group(k) for k in (2, 3, 4, 6))
    v4 = direct_product(c2, c2)
    cat["C2xC2"] = v4
    cat["C2xC4"] = direct_product(c2, c4)
    cat["C2xC2xC2"] = direct_product(c2, v4)
    cat["C3xC3"] = direct_product(c3, c3)
    cat["C2xC6"] = direct_product(c2, c6)
    for n in (3, 4, 5, 6):
        g = dihedral_group(n)
        cat[g.name] = g
    cat["Q8"] = dicyclic_group(2)
    cat["Dic3"] = dicyclic_group(3)
    cat["A4"] = alternating4_group()
    return cat


def count_homs(
    p: GroupPresentation,
    G: FiniteGroupTable,
    order: str = "forward",
    budget: int = HOM_BUDGET,
) -> int:
    """Exact number of homomorphisms from the presented group into G.

    Exhaustive search over all generator images; the enumeration order
    ("forward" or "reversed") must not change the count, which tests use
    as a self-check.
    """
    k = len(p.generators)
    if G.order**k > budget:
        raise DomainError(
            f"count_homs: {G.order}^{k} evaluations exceed budget {budget}"
        )
    if order not in ("forward", "reversed"):
        raise DomainError(f"unknown enumeration order {order!r}")
    rng = range(G.order) if order == "forward" else range(G.order - 1, -1, -1)
    tab, inv = G.table, G.inverse
    count = 0
    for images in product(rng, repeat=k):
        ok = True
        for rel in p.relators:
            acc = 0
            for x in rel:
                g = images[x - 1] if x > 0 else inv[images[-x - 1]]
                acc = tab[acc][g]
            if acc != 0:
                ok = False
                break
        if ok:
            count += 1
    return count


# -- handle bookkeeping --------------------------------------------------------


@dataclass(frozen=True)
class HandleData:
    """Handle decomposition bookkeeping for the affine surface.

    counts = (# 0-handles, # 1-handles, # 2-handles, # 3-handles).
    framings pairs each 2-handle name with its framing.  runs records,
    per 2-handle, the algebraic run counts of its attaching circle over
    the 1-handles.
    """

    counts: tuple
    framings: tuple
    runs: tuple

    def euler_characteristic(self) -> int:
        n0, n1, n2, n3 = self.counts
        return n0 - n1 + n2 - n3

    def boundary_2(self) -> list:
        """d2: C2 -> C1; columns follow the 2-handle order of runs."""
        n1 = self.counts[1]
        return [[run[i] for run in self.runs] for i in range(n1)]


def kirby_handle_data(d1: int, d2: int) -> HandleData:
    """One 0-handle, two 1-handles c1/c2, three 2-handles.

    h is 0-framed and runs algebraically zero times over each 1-handle;
    a_j is (-d_j)-framed and runs once over c_j.
    """
    if d1 < 1 or d2 < 1:
        raise DomainError(f"need d1, d2 >= 1, got ({d1}, {d2})")
    return HandleData(
        counts=(1, 2, 3, 0),
        framings=(("h", 0), ("a1", -d1), ("a2", -d2)),
        runs=((0, 0), (1, 0), (0, 1)),
    )


def chain_complex_homology(h: HandleData) -> tuple:
    """(H0, H1, H2) of the handle chain complex, via Smith normal form.

    d1: C1 -> C0 vanishes (each 1-handle runs from the 0-handle to
    itself), which the decomposition guarantees; so H0 = Z, H1 is the
    cokernel of d2 and H2 its kernel.
    """
    n0, n1, n2, n3 = h.counts
    if n0 != 1 or n3 != 0:
        raise DomainError("chain_complex_homology expects one 0-handle, no 3-handles")
    d2 = h.boundary_2()
    snf = smith_normal_form(d2)
    rank = sum(1 for x in snf.diagonal if x)
    h0 = AbelianGroup(1, ())
    h1 = cokernel(d2, ambient_rank=n1)
    h2 = AbelianGroup(n2 - rank, ())
    return (h0, h1, h2)


# -- 2-bridge knot invariants ----------------------------------------------------


def two_bridge_fraction(d1: int, d2: int) -> tuple:
    """2-bridge fraction of the knot K_[2d1, 2d2].

    Convention (frozen by the trefoil anchor): the even continued
    fraction expands as p/q = 2*d1 - 1/(2*d2), giving
    (4*d1*d2 - 1, 2*d2).  The numerator is always odd, as a knot
    requires; (1,1) lands in the trefoil's class 3/1 since
    2*1 = -1 mod 3.
    """
    if d1 < 1 or d2 < 1:
        raise DomainError(f"need d1, d2 >= 1, got ({d1}, {d2})")
    return (4 * d1 * d2 - 1, 2 * d2)


def same_two_bridge_class(a: tuple, b: tuple) -> bool:
    """Unoriented 2-bridge equivalence: p = p' and q' = +-q^{+-1} mod p."""
    p, q = a
    p2, q2 = b
    if p != p2:
        return False
    if p == 0:
        return q % 1 == q2 % 1
    q, q2 = q % p, q2 % p
    cands = {q, (-q) % p}
    if math.gcd(q, p) == 1:
        cands.add(pow(q, -1, p))
        cands.add((-pow(q, -1, p)) % p)
    return q2 in cands


class LaurentPoly1:
    """Integer Laurent polynomial in one variable; no stored zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @staticmethod
    def term(coeff: int, exp: int = 0) -> "LaurentPoly1":
        return LaurentPoly1({exp: coeff})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly1(out)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return LaurentPoly1({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly1(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    @staticmethod
    def _coerce(x):
        if isinstance(x, LaurentPoly1):
            return x
        if isinstance(x, int):
            return LaurentPoly1({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly1")

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def shift(self, k: int) -> "LaurentPoly1":
        return LaurentPoly1({e + k: c for e, c in self.coeffs.items()})

    def reciprocal(self) -> "LaurentPoly1":
        """Substitute t -> 1/t."""
        return LaurentPoly1({-e: c for e, c in self.coeffs.items()})

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        if x == 0 and any(e < 0 for e in self.coeffs):
            raise DomainError("cannot evaluate negative powers at 0")
        return sum((c * x**e for e, c in self.coeffs.items()), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> tuple:
        return tuple(sorted(self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                body = str(abs(c))
            else:
                t = "t" if e == 1 else f"t^{e}"
                body = t if abs(c) == 1 else f"{abs(c)}*{t}"
            parts.append(("- " if c < 0 else "+ ") + body)
        head = parts[0].replace("+ ", "", 1).replace("- ", "-", 1)
        return " ".join([head] + parts[1:])

    def __repr__(self):
        return f"LaurentPoly1({self.coeffs!r})"


def alexander_polynomial(d1: int, d2: int) -> LaurentPoly1:
    """Alexander polynomial of K_[2d1, 2d2], symmetric-normalized.

    Computed as det(V - t V^T) from the genus-1 Seifert matrix
    V = [[-d1, 1], [0, -d2]], then shifted so Delta(t) = Delta(1/t) and
    scaled so Delta(1) = 1.  The matrix convention is validated by the
    trefoil anchor at (1,1): t - 1 + 1/t.
    """
    if d1 < 1 or d2 < 1:
        raise DomainError(f"need d1, d2 >= 1, got ({d1}, {d2})")
    t = LaurentPoly1.term(1, 1)
    v = [[-d1, 1], [0, -d2]]
    a = [[LaurentPoly1.term(v[i][j]) - t * v[j][i] for j in range(2)] for i in range(2)]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    lo, hi = det.support()[0], det.support()[-1]
    if (lo + hi) % 2:
        raise AssertionError("determinant support cannot be centered")
    det = det.shift(-(lo + hi) // 2)
    if det.evaluate(1) < 0:
        det = -det
    assert det == det.reciprocal(), "normalized polynomial must be symmetric"
    return det
