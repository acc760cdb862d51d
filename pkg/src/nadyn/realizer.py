"""Compile a non-negative integer matrix into a hyperbolic rational map over Q_p.

Pipeline: admissibility -> class hierarchy -> disk arrangement -> choice of
an even exponent M -> gluing of the linear pieces into one rational map ->
certified verification. Every bound is an exact statement about
valuations, so verification needs no floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import poly
from . import zeta as zeta_mod
from .disks import Disk, affine_image, contains, disjoint, disk_from_json, disk_to_json, relation, Relation, strictly_contains
from .markov import AffinePiece, PiecewiseSystem
from .valued import INF, FieldContext, format_rational, parse_rational, valuation
from .zeta import RootCertificate

HALF = Fraction(1, 2)


class HierarchyIncomplete(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class OddM(ValueError):
    pass


class SurgeryWindowViolated(ValueError):
    pass


# --- admissibility -------------------------------------------------------


def row_support(a: Sequence[Sequence[int]], i: int) -> frozenset[int]:
    return frozenset(j for j, x in enumerate(a[i]) if x)


@dataclass(frozen=True)
class AdmissibilityReport:
    nonzero_ok: bool
    constant_ok: bool
    containing_ok: bool
    markov_ok: bool
    irreducible_ok: bool
    zero_one: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.nonzero_ok and self.constant_ok and self.containing_ok and self.markov_ok and self.irreducible_ok

    @property
    def structural_ok(self) -> bool:
        """The properties the disk construction itself relies on."""
        return self.zero_one and self.nonzero_ok and self.constant_ok and self.containing_ok and self.irreducible_ok


def _reachable(a, i) -> set[int]:
    seen, todo = set(), [i]
    while todo:
        u = todo.pop()
        for v, x in enumerate(a[u]):
            if x and v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def check_admissible(a: Sequence[Sequence[int]]) -> AdmissibilityReport:
    a = zeta_mod.check_matrix(a)
    n = len(a)
    w: dict = {}
    supports = [row_support(a, i) for i in range(n)]

    nonzero_ok = True
    for i in range(n):
        if not supports[i]:
            nonzero_ok, w["nonzero"] = False, {"row": i}
            break
        if not any(a[k][i] for k in range(n)):
            nonzero_ok, w["nonzero"] = False, {"column": i}
            break

    constant_ok = True
    for i in range(n):
        if len({a[i][j] for j in supports[i]}) > 1:
            constant_ok, w["constant"] = False, {"row": i}
            break

    containing_ok = True
    for i in range(n):
        for k in range(i + 1, n):
            s, t = supports[i], supports[k]
            if s & t and not (s <= t or t <= s):
                containing_ok, w["containing"] = False, {"rows": [i, k]}
                break
        if not containing_ok:
            break

    # Row i of A^m has support S_m, with S_{m+1} the union of the row supports
    # over S_m; once |S_m| < 2 the sequence is determined by a single index.
    markov_ok = True
    for i in range(n):
        s, seen = supports[i], set()
        while len(s) < 2 and s not in seen:
            seen.add(s)
            s = frozenset().union(*(supports[j] for j in s))
        if len(s) < 2:
            markov_ok, w["markov"] = False, {"row": i}
            break

    irreducible_ok = n > 0 and all(len(_reachable(a, i)) == n for i in range(n))
    if not irreducible_ok and n:
        i = next(i for i in range(n) if len(_reachable(a, i)) < n)
        w["irreducible"] = {"row": i}

    zero_one = all(x in (0, 1) for row in a for x in row)
    return AdmissibilityReport(nonzero_ok, constant_ok, containing_ok, markov_ok, irreducible_ok, zero_one, w)


# --- hierarchy -----------------------------------------------------------


@dataclass(frozen=True)
class HClass:
    members: frozenset[int]
    level: int
    indicators: frozenset[int]
    successors: tuple[int, ...]
    parent: int | None
    terminals: frozenset[int]


@dataclass(frozen=True)
class Hierarchy:
    size: int
    classes: tuple[HClass, ...]
    terminals: dict  # index -> level
    terminal_class: dict  # index -> class id holding it as a terminal
    kappa: dict  # index -> class id it indicates


def hierarchy(a: Sequence[Sequence[int]]) -> Hierarchy:
    a = zeta_mod.check_matrix(a)
    rep = check_admissible(a)
    if not (rep.nonzero_ok and rep.containing_ok):
        raise NotAdmissible(f"matrix lacks the nonzero or containing property: {rep.witnesses}")
    n = len(a)
    sets = [row_support(a, i) for i in range(n)]
    used: set[int] = set()

    def maximal_sets(inside: frozenset[int] | None) -> list[frozenset[int]]:
        pool = {sets[i] for i in range(n) if i not in used and (inside is None or sets[i] < inside)}
        top = [s for s in pool if not any(s < t for t in pool)]
        return sorted(top, key=min)

    # Breadth-first construction; each entry is (members, level, parent id).
    raw: list[dict] = []
    queue = [(s, 1, None) for s in maximal_sets(None)]
    for s, _, _ in queue:
        used.update(i for i in range(n) if sets[i] == s)
    while queue:
        level_next = []
        for members, level, parent in queue:
            cid = len(raw)
            raw.append({"members": members, "level": level, "parent": parent, "succ": [],
                        "ind": frozenset(i for i in range(n) if sets[i] == members)})
            if parent is not None:
                raw[parent]["succ"].append(cid)
            level_next.append(cid)
        queue = []
        for cid in level_next:
            children = maximal_sets(raw[cid]["members"])
            for s in children:
                used.update(i for i in range(n) if sets[i] == s)
            queue.extend((s, raw[cid]["level"] + 1, cid) for s in children)

    kappa = {}
    for cid, c in enumerate(raw):
        for i in c["ind"]:
            if i in kappa:
                raise HierarchyIncomplete(f"index {i} indicates two classes")
            kappa[i] = cid
    missing = [i for i in range(n) if i not in kappa]
    if missing:
        raise HierarchyIncomplete(f"indices {missing} indicate no class")

    terminals, terminal_class, classes = {}, {}, []
    for cid, c in enumerate(raw):
        covered = set().union(*(raw[s]["members"] for s in c["succ"]))
        term = frozenset(c["members"] - covered)
        for j in term:
            if j in terminals:
                raise HierarchyIncomplete(f"index {j} is a terminal twice")
            terminals[j], terminal_class[j] = c["level"], cid
        classes.append(HClass(c["members"], c["level"], c["ind"], tuple(c["succ"]), c["parent"], term))
    if len(terminals) != n:
        raise HierarchyIncomplete("some index is not a terminal of any level")
    return Hierarchy(n, tuple(classes), terminals, terminal_class, kappa)


# --- arrangement ---------------------------------------------------------


@dataclass(frozen=True)
class Arrangement:
    ctx: FieldContext
    hierarchy: Hierarchy
    class_disks: tuple[Disk, ...]
    terminal_disks: tuple[Disk, ...]  # indexed by matrix index
    maps: tuple[tuple[Fraction, Fraction], ...]  # (alpha, beta) per index
    sink: Disk

    @property
    def size(self) -> int:
        return len(self.terminal_disks)

    def system(self) -> PiecewiseSystem:
        pieces = [AffinePiece(d, al, be) for d, (al, be) in zip(self.terminal_disks, self.maps)]
        return PiecewiseSystem(self.ctx, tuple(pieces), self.sink)

    def image(self, i: int) -> Disk:
        al, be = self.maps[i]
        return affine_image(self.terminal_disks[i], al, be, self.ctx)


def _depth(p: int, k: int, reserve: int) -> int:
    """Least d >= 1 with p**d >= k + reserve."""
    d = 1
    while p**d < k + reserve:
        d += 1
    return d


def arrange(h: Hierarchy, ctx: FieldContext, seeds: str = "lex") -> Arrangement:
    """Place class and terminal disks on the p-adic digit tree of the unit disk.

    ``seeds="paper"`` keeps the tree as shallow as possible and only leaves
    a free slot inside classes without successors. ``seeds="lex"`` always
    leaves a free slot.
    """
    if seeds not in ("paper", "lex"):
        raise ValueError(f"unknown seed scheme {seeds!r}")
    p = ctx.p
    class_disks: list[Disk | None] = [None] * len(h.classes)
    terminal_disks: list[Disk | None] = [None] * h.size

    roots = [cid for cid, c in enumerate(h.classes) if c.parent is None]
    d = 1
    while p**d - p ** (d - 1) < len(roots):
        d += 1
    slots = (m for m in range(p**d) if m % p)
    for cid in roots:
        class_disks[cid] = Disk.closed(next(slots), d)

    order = sorted(range(len(h.classes)), key=lambda c: (h.classes[c].level, min(h.classes[c].members)))
    for cid in order:
        c = h.classes[cid]
        disk = class_disks[cid]
        assert disk is not None
        succ = sorted(c.successors, key=lambda s: min(h.classes[s].members))
        terms = sorted(c.terminals)
        k = len(succ) + len(terms)
        reserve = 1 if (seeds == "lex" or not succ) else 0
        depth = _depth(p, k, reserve)
        r = int(disk.radius_exp)
        step = Fraction(p) ** r
        for digit, item in enumerate([("c", s) for s in succ] + [("t", j) for j in terms]):
            sub = Disk.closed(disk.center + digit * step, r + depth)
            if item[0] == "c":
                class_disks[item[1]] = sub
            else:
                terminal_disks[item[1]] = sub

    maps = []
    for i in range(h.size):
        src, dst = terminal_disks[i], class_disks[h.kappa[i]]
        alpha = Fraction(p) ** int(dst.radius_exp - src.radius_exp)
        maps.append((alpha, dst.center - alpha * src.center))
    arr = Arrangement(ctx, h, tuple(class_disks), tuple(terminal_disks), tuple(maps), Disk.closed(0, 1))
    problems = arrangement_problems(arr)
    if problems:
        raise AssertionError("arrangement invariants failed: " + "; ".join(problems))
    return arr


def arrangement_problems(arr: Arrangement, a: Sequence[Sequence[int]] | None = None) -> list[str]:
    """Exact checks of the geometric invariants; empty when all hold."""
    ctx, out = arr.ctx, []
    unit = Disk.closed(0, 0)
    disks = list(arr.terminal_disks) + list(arr.class_disks)
    for d in disks:
        if not strictly_contains(unit, d, ctx) or not disjoint(d, arr.sink, ctx):
            out.append(f"{d!r} is not inside the unit disk away from the sink")
    ts = arr.terminal_disks
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if not disjoint(ts[i], ts[j], ctx):
                out.append(f"terminal disks {i} and {j} meet")
    h = arr.hierarchy
    for cid, c in enumerate(h.classes):
        cd = arr.class_disks[cid]
        for s in c.successors:
            if not strictly_contains(cd, arr.class_disks[s], ctx):
                out.append(f"class {s} not strictly inside class {cid}")
        for j in c.members:
            if not strictly_contains(cd, ts[j], ctx):
                out.append(f"terminal {j} not strictly inside class {cid}")
        # Union of member disks is a proper subset: some digit slot is free
        # at some depth, witnessed by a point of cd outside every member disk.
        if not _has_gap(cd, [ts[j] for j in c.members], ctx):
            out.append(f"member disks fill class {cid}")
    for i in range(arr.size):
        img = arr.image(i)
        if relation(img, arr.class_disks[h.kappa[i]], ctx) is not Relation.EQUAL:
            out.append(f"map {i} is not onto its class disk")
        if a is not None:
            for j in range(arr.size):
                if bool(a[i][j]) != contains(img, ts[j], ctx):
                    out.append(f"adjacency mismatch at ({i},{j})")
    return out


def _has_gap(outer: Disk, parts: Sequence[Disk], ctx: FieldContext) -> bool:
    """True iff the union of the disjoint parts is a proper subset of outer."""
    p = ctx.p
    todo = [outer]
    while todo:
        d = todo.pop()
        inside = [q for q in parts if contains(q, d, ctx)]
        if inside:
            continue
        below = [q for q in parts if strictly_contains(d, q, ctx)]
        if not below:
            return True
        r = int(d.radius_exp)
        todo.extend(Disk.closed(d.center + k * Fraction(p) ** r, r + 1) for k in range(p))
    return False


# --- gluing --------------------------------------------------------------


@dataclass(frozen=True)
class Marker:
    """Gluing data of one piece: f(z) = alpha*z + beta near the center a."""

    index: int | None  # None for the sink piece
    alpha: Fraction
    beta: Fraction
    center: Fraction
    x_val: int


def markers(arr: Arrangement) -> list[Marker]:
    out = [
        Marker(i, al, be, arr.terminal_disks[i].center, int(arr.terminal_disks[i].radius_exp))
        for i, (al, be) in enumerate(arr.maps)
    ]
    out.append(Marker(None, Fraction(1), Fraction(0), Fraction(0), 1))
    return out


def _surgery_window(arr: Arrangement) -> None:
    ctx = arr.ctx
    ms = markers(arr)
    for m in ms:
        vb = m.x_val - HALF
        for o in ms:
            if o is m:
                continue
            if not valuation(m.center - o.center, ctx) < vb:
                raise SurgeryWindowViolated(f"|b| is not below the distance between markers {m.index} and {o.index}")


def choose_M(arr: Arrangement) -> int:
    """Least even M >= 2 meeting the three families of escape bounds."""
    _surgery_window(arr)
    ctx = arr.ctx
    bounds = []  # (constant part, uses M/2 rather than (M-1)/2)
    for m in markers(arr)[:-1]:
        va, vb = valuation(m.alpha, ctx), m.x_val - HALF
        if m.beta:
            bounds.append((valuation(m.beta, ctx), True))
        bounds.append((va + vb, False))
        if m.center:
            bounds.append((va + valuation(m.center, ctx) + vb - m.x_val, False))

    def holds(M: int) -> bool:
        return all(base + (Fraction(M, 2) if even else Fraction(M - 1, 2)) >= 1 for base, even in bounds)

    M = 2
    while not holds(M):
        M += 2
    return M


@dataclass(frozen=True)
class GlueTerm:
    marker: Marker
    M: int
    c: Fraction  # x^M / p^(M/2)
    p: int

    @property
    def numerator(self) -> list[Fraction]:
        return poly.trim([self.c * self.marker.beta, self.c * self.marker.alpha])

    @property
    def denominator(self) -> list[Fraction]:
        shifted = poly.power([-self.marker.center, 1], self.M)
        return poly.sub([self.c], shifted)

    def __call__(self, z: Fraction) -> Fraction:
        m = self.marker
        return (m.alpha * z + m.beta) * self.c / (self.c - (z - m.center) ** self.M)

    def __str__(self) -> str:
        m = self.marker
        lin = [m.beta, m.alpha]
        k = poly.content(lin) * (1 if m.alpha > 0 else -1)
        u, w = m.alpha / k, m.beta / k
        body = _linear(u, w)
        scalar = _power_form(self.c * k, self.p)
        shifted = "z" if m.center == 0 else f"(z{'-' if m.center > 0 else '+'}{_fmt(abs(m.center))})"
        return f"{scalar}{body}/({_power_form(self.c, self.p)}-{shifted}^{self.M})"


def _fmt(x: Fraction) -> str:
    return format_rational(x)


def _linear(u: Fraction, w: Fraction) -> str:
    lead = "z" if u == 1 else f"{_fmt(u)}z"
    if w == 0:
        return lead
    return f"({lead}{'+' if w > 0 else '-'}{_fmt(abs(w))})"


def _power_form(x: Fraction, p: int) -> str:
    """Write ±p^e compactly, anything else in decimal."""
    sign = "-" if x < 0 else ""
    y = abs(x)
    for num, den, s in ((y.numerator, y.denominator, ""), (y.denominator, y.numerator, "-")):
        if den == 1 and num > 1:
            e = 0
            while num % p == 0:
                num //= p
                e += 1
            if num == 1:
                return f"{sign}{p}^{s}{e}" if e > 1 or s else f"{sign}{p}"
    return sign + _fmt(y) if y.denominator == 1 else f"{sign}({_fmt(y)})"


@dataclass(frozen=True)
class RationalMapExpr:
    terms: tuple[GlueTerm, ...]
    numerator: tuple[int, ...]  # combined P, constant term first
    denominator: tuple[int, ...]  # combined Q

    def __call__(self, z: Fraction) -> Fraction:
        return poly.evaluate(self.numerator, z) / poly.evaluate(self.denominator, z)

    def term_sum(self, z: Fraction) -> Fraction:
        return sum((t(z) for t in self.terms), Fraction(0))

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms)


def glue(arr: Arrangement, M: int) -> RationalMapExpr:
    if M % 2 or M < 2:
        raise OddM(f"M must be a positive even integer, got {M}")
    p = arr.ctx.p
    terms = []
    for m in markers(arr):
        c = Fraction(p) ** (M * m.x_val) / Fraction(p) ** (M // 2)
        terms.append(GlueTerm(m, M, c, p))
    num: list = []
    den: list = [1]
    for t in terms:
        num = poly.add(poly.mul(num, t.denominator), poly.mul(t.numerator, den))
        den = poly.mul(den, t.denominator)
    scale = math.lcm(*(Fraction(x).denominator for x in num + den))
    num = [x * scale for x in num]
    den = [x * scale for x in den]
    g = math.gcd(*(int(x) for x in num + den))
    sign = 1 if den[-1] > 0 else -1
    return RationalMapExpr(
        tuple(terms),
        tuple(poly.to_int([x * sign / g for x in num])),
        tuple(poly.to_int([x * sign / g for x in den])),
    )


# --- verification --------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    name: str
    index: int | None
    margin: Fraction | None
    passed: bool
    family: str  # "agreement", "escape", "window", "adjacency", "expression"


@dataclass(frozen=True)
class VerificationReport:
    certificates: tuple[Certificate, ...]
    adjacency: list[list[int]]
    M: int

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.certificates)

    def failed(self, family: str | None = None) -> list[Certificate]:
        return [c for c in self.certificates if not c.passed and (family is None or c.family == family)]


def _minval(d: Disk, ctx: FieldContext) -> Fraction:
    """Least valuation of a point of the closed disk d."""
    return min(valuation(d.center, ctx), d.radius_exp)


def _error_bound(arr: Arrangement, i: int, M: int) -> Fraction:
    """Lower bound for val(F(z) - f_i(z)) over the terminal disk of index i."""
    ctx = arr.ctx
    disk = arr.terminal_disks[i]
    ms = markers(arr)
    own = _minval(arr.image(i), ctx) + Fraction(M, 2)
    bounds = [own]
    for m in ms:
        if m.index == i:
            continue
        dist = valuation(disk.center - m.center, ctx)
        h_val = M * (m.x_val - HALF - dist)
        bounds.append(_minval(affine_image(disk, m.alpha, m.beta, ctx), ctx) + h_val)
    return min(bounds)


def verify_realization(
    arr: Arrangement,
    M: int,
    a: Sequence[Sequence[int]],
    expr: RationalMapExpr | None = None,
    seed: int = 0,
) -> VerificationReport:
    ctx = arr.ctx
    if M % 2 or M < 2:
        raise OddM(f"M must be a positive even integer, got {M}")
    certs: list[Certificate] = []
    ms = markers(arr)

    # window: diam(D_i) < |b_i| < distance to every other marker
    for m in ms:
        vb = m.x_val - HALF
        near = max((valuation(m.center - o.center, ctx) for o in ms if o is not m), default=-INF)
        margin = vb - near
        certs.append(Certificate("window", m.index, margin, margin > 0 and m.x_val > vb, "window"))

    # escape bounds outside the disks, recomputed from the markers
    for m in ms[:-1]:
        va, vb = valuation(m.alpha, ctx), m.x_val - HALF
        if m.beta:
            certs.append(Certificate("beta", m.index, valuation(m.beta, ctx) + Fraction(M, 2) - 1, False, "escape"))
        certs.append(Certificate("alpha_b", m.index, va + vb + Fraction(M - 1, 2) - 1, False, "escape"))
        if m.center:
            val_a = valuation(m.center, ctx)
            certs.append(Certificate("alpha_a_b", m.index, va + val_a + vb - m.x_val + Fraction(M - 1, 2) - 1, False, "escape"))
    certs.append(Certificate("sink", None, Fraction(M, 2) - 1, False, "escape"))
    certs = [
        Certificate(c.name, c.index, c.margin, c.margin >= 0, c.family) if c.family == "escape" else c
        for c in certs
    ]

    # agreement with f_i on each terminal disk, and injectivity
    ts = arr.terminal_disks
    for i in range(arr.size):
        err = _error_bound(arr, i, M)
        img = arr.image(i)
        targets = [ts[j].radius_exp for j in range(arr.size) if contains(img, ts[j], ctx)]
        finest = max(targets, default=img.radius_exp)
        # Closed disks: val(F - f_i) >= r already puts F(z) and f_i(z) in the same disk of radius r.
        certs.append(Certificate("agreement", i, err - finest, err >= finest, "agreement"))
        certs.append(Certificate("degree_one", i, err - img.radius_exp, err > img.radius_exp, "agreement"))

    # adjacency of the induced covering
    adj = [[int(contains(arr.image(i), ts[j], ctx)) for j in range(arr.size)] for i in range(arr.size)]
    a = zeta_mod.check_matrix(a)
    for i in range(arr.size):
        certs.append(Certificate("adjacency", i, None, adj[i] == list(a[i]), "adjacency"))

    if expr is not None:
        certs.append(Certificate("expression", None, None, _expression_ok(arr, M, expr, seed), "expression"))
    return VerificationReport(tuple(certs), adj, M)


def _expression_ok(arr: Arrangement, M: int, expr: RationalMapExpr, seed: int) -> bool:
    p = arr.ctx.p
    ms = markers(arr)
    if len(expr.terms) != len(ms):
        return False
    for t, m in zip(expr.terms, ms):
        expected_c = Fraction(p) ** (M * m.x_val - M // 2)
        if t.M != M or t.c != expected_c or (t.marker.alpha, t.marker.beta, t.marker.center) != (m.alpha, m.beta, m.center):
            return False
    rng = random.Random(seed)
    tried = 0
    while tried < 3:
        z = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        if poly.evaluate(expr.denominator, z) == 0 or any(poly.evaluate(t.denominator, z) == 0 for t in expr.terms):
            continue
        tried += 1
        if expr(z) != expr.term_sum(z):
            return False
    return True


# --- end to end ----------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    matrix: list[list[int]]
    arrangement: Arrangement
    M: int
    expr: RationalMapExpr
    report: VerificationReport
    entropy: RootCertificate
    route: str  # "direct" or "augmented"
    warnings: tuple[str, ...]
    source: list[list[int]]
    n0: int
    j0: int


def realize(
    b: Sequence[Sequence[int]],
    n0: int = 1,
    j0: int = 1,
    ctx: FieldContext | None = None,
    seeds: str = "lex",
    M: int | None = None,
    tol: Fraction = zeta_mod.DEFAULT_TOL,
    max_raise: int = 200,
) -> Realization:
    """Build and verify a rational map whose entropy is log of the leading root of b.

    A 0/1 matrix that already has the structural admissibility properties is
    realized as given when n0 = j0 = 1. Otherwise b^j0 must be positive and
    its (n0*j0)-augmented graph is realized.
    """
    ctx = ctx or FieldContext(2)
    b = zeta_mod.check_matrix(b)
    if n0 < 1 or j0 < 1:
        raise ValueError("n0 and j0 must be positive")
    warnings: list[str] = []
    first = check_admissible(b) if b else None
    if n0 == 1 and j0 == 1 and first is not None and first.structural_ok:
        a, route = [row[:] for row in b], "direct"
        if not first.markov_ok:
            warnings.append("MarkovPropertyFails")
    else:
        power = zeta_mod.matpow(b, j0)
        if not b or any(x == 0 for row in power for x in row):
            raise NotPrimitive(f"b^{j0} has a zero entry")
        a, route = zeta_mod.augment(power, n0 * j0), "augmented"
        rep = check_admissible(a)
        if not rep.structural_ok:
            raise NotAdmissible(f"augmented matrix is not admissible: {rep.witnesses}")
        if not rep.markov_ok:
            warnings.append("MarkovPropertyFails")
    h = hierarchy(a)
    arr = arrange(h, ctx, seeds)
    if M is None:
        M = choose_M(arr)
        report = verify_realization(arr, M, a)
        start = M
        while not report.ok and M < start + max_raise:
            M += 2
            report = verify_realization(arr, M, a)
        if M != start:
            warnings.append(f"MRaised:{start}->{M}")
    elif M % 2 or M < 2:
        raise OddM(f"M must be a positive even integer, got {M}")
    expr = glue(arr, M)
    report = verify_realization(arr, M, a, expr)
    cert = zeta_mod.leading_root(a, tol)
    return Realization(a, arr, M, expr, report, cert, route, tuple(warnings), b, n0, j0)


# --- serialization -------------------------------------------------------


def arrangement_to_json(arr: Arrangement) -> dict:
    h = arr.hierarchy
    return {
        "p": arr.ctx.p,
        "classes": [
            {
                "members": sorted(c.members),
                "level": c.level,
                "indicators": sorted(c.indicators),
                "successors": list(c.successors),
                "parent": c.parent,
                "terminals": sorted(c.terminals),
                "disk": disk_to_json(arr.class_disks[cid]),
            }
            for cid, c in enumerate(h.classes)
        ],
        "pieces": [
            {
                "index": i,
                "disk": disk_to_json(arr.terminal_disks[i]),
                "alpha": format_rational(al),
                "beta": format_rational(be),
                "class": h.kappa[i],
            }
            for i, (al, be) in enumerate(arr.maps)
        ],
        "sink": disk_to_json(arr.sink),
    }


def arrangement_from_json(obj: dict, a: Sequence[Sequence[int]]) -> Arrangement:
    """Rebuild an arrangement; the hierarchy is recomputed from the matrix."""
    ctx = FieldContext(obj["p"])
    h = hierarchy(a)
    if len(obj["classes"]) != len(h.classes) or len(obj["pieces"]) != h.size:
        raise ValueError("arrangement does not match the matrix hierarchy")
    class_disks = tuple(disk_from_json(c["disk"]) for c in obj["classes"])
    pieces = sorted(obj["pieces"], key=lambda x: x["index"])
    terminal = tuple(disk_from_json(x["disk"]) for x in pieces)
    maps = tuple((parse_rational(x["alpha"]), parse_rational(x["beta"])) for x in pieces)
    return Arrangement(ctx, h, class_disks, terminal, maps, disk_from_json(obj["sink"]))


def expr_to_json(expr: RationalMapExpr) -> dict:
    return {
        "terms": [
            {
                "index": t.marker.index,
                "text": str(t),
                "numerator": [format_rational(x) for x in t.numerator],
                "denominator": [format_rational(x) for x in t.denominator],
            }
            for t in expr.terms
        ],
        "combined": {
            "numerator": [str(x) for x in expr.numerator],
            "denominator": [str(x) for x in expr.denominator],
        },
        "text": str(expr),
    }


def report_to_json(report: VerificationReport) -> dict:
    return {
        "ok": report.ok,
        "M": report.M,
        "adjacency": zeta_mod.matrix_to_json(report.adjacency),
        "certificates": [
            {
                "name": c.name,
                "family": c.family,
                "index": c.index,
                "margin": None if c.margin is None else format_rational(c.margin),
                "passed": c.passed,
            }
            for c in report.certificates
        ],
    }


def realization_to_json(r: Realization) -> dict:
    return {
        "source": zeta_mod.matrix_to_json(r.source),
        "n0": r.n0,
        "j0": r.j0,
        "route": r.route,
        "matrix": zeta_mod.matrix_to_json(r.matrix),
        "arrangement": arrangement_to_json(r.arrangement),
        "M": r.M,
        "map": expr_to_json(r.expr),
        "verification": report_to_json(r.report),
        "entropy": zeta_mod.entropy_to_json(r.entropy),
        "warnings": list(r.warnings),
    }
