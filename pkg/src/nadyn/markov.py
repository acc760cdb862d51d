"""Piecewise-affine systems on disks and their Markov refinement.

A system is a finite list of affine pieces ``z -> alpha*z + beta`` on pairwise
disjoint closed disks. Refinement starts from the piece domains, discards
disks whose orbit leaves the cover, and splits until every cover disk maps
over at least one cover disk in a single step. The resulting 0/1 adjacency
matrix carries the zeta function and the entropy of the dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import zeta as zeta_mod
from .disks import (
    CLOSED,
    Disk,
    affine_image,
    affine_preimage,
    contains,
    disjoint,
    disk_from_json,
    disk_to_json,
    relation,
    Relation,
    split,
)
from .valued import FieldContext, format_rational, parse_rational
from .zeta import DEFAULT_TOL, RationalFunctionZ, RootCertificate


class InvalidSystem(ValueError):
    pass


class NoCoverHit(Exception):
    pass


class Escaped(NoCoverHit):
    """The orbit of the disk leaves every cover disk."""


class CapExceeded(NoCoverHit):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class IndexLawViolation(AssertionError):
    pass


@dataclass(frozen=True)
class AffinePiece:
    domain: Disk
    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha == 0:
            raise InvalidSystem("piece with zero scale factor")
        if self.domain.kind != CLOSED or not self.domain.is_integral:
            raise InvalidSystem(f"piece domain {self.domain!r} must be a closed disk")

    def __call__(self, z):
        return self.alpha * z + self.beta

    def image(self, d: Disk, ctx: FieldContext) -> Disk:
        return affine_image(d, self.alpha, self.beta, ctx)

    def preimage(self, d: Disk, ctx: FieldContext) -> Disk:
        return affine_preimage(d, self.alpha, self.beta, ctx)


@dataclass(frozen=True)
class PiecewiseSystem:
    ctx: FieldContext
    pieces: tuple[AffinePiece, ...]
    sink: Disk | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))
        ds = [pc.domain for pc in self.pieces]
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if not disjoint(ds[i], ds[j], self.ctx):
                    raise InvalidSystem(f"domains {ds[i]!r} and {ds[j]!r} overlap")
        if self.sink is not None:
            for d in ds:
                if not disjoint(d, self.sink, self.ctx):
                    raise InvalidSystem(f"sink meets domain {d!r}")


@dataclass(frozen=True)
class CoverDisk:
    disk: Disk
    piece: int  # index of the ancestor piece


@dataclass(frozen=True)
class SplitEvent:
    source: Disk  # disk whose index drove the split
    target: Disk  # cover disk that was split
    via: Disk
    outputs: tuple[Disk, ...]
    index_before: int
    index_after: int

    @property
    def drop(self) -> int:
        return self.index_before - self.index_after


@dataclass(frozen=True)
class PruneEvent:
    disks: tuple[Disk, ...]


@dataclass
class CoverState:
    cover: list[CoverDisk]
    m_values: list[int]
    history: list = field(default_factory=list)

    @property
    def disks(self) -> list[Disk]:
        return [c.disk for c in self.cover]

    @property
    def index(self) -> int:
        return sum(m - 1 for m in self.m_values)

    @property
    def escaped(self) -> list[Disk]:
        return [d for ev in self.history if isinstance(ev, PruneEvent) for d in ev.disks]

    @property
    def splits(self) -> list[SplitEvent]:
        return [ev for ev in self.history if isinstance(ev, SplitEvent)]


def _image(cd: CoverDisk, system: PiecewiseSystem) -> Disk:
    return system.pieces[cd.piece].image(cd.disk, system.ctx)


def adjacency(cover: Sequence[CoverDisk], system: PiecewiseSystem) -> list[list[int]]:
    ctx = system.ctx
    images = [_image(c, system) for c in cover]
    return [[int(contains(img, c.disk, ctx)) for c in cover] for img in images]


def _orbit(u: CoverDisk, cover: Sequence[CoverDisk], system: PiecewiseSystem, cap: int):
    """Return (m, E, j): f^(m-1)(u) = E lies strictly inside cover[j] (j is None when m = 1)."""
    ctx = system.ctx
    current, holder = u.disk, u
    container = None
    for n in range(1, cap + 1):
        img = system.pieces[holder.piece].image(current, ctx)
        inside = None
        for j, c in enumerate(cover):
            rel = relation(img, c.disk, ctx)
            if rel in (Relation.EQUAL, Relation.OUTER):
                return n, current, container
            if rel is Relation.INNER:
                inside = j
        if inside is None:
            raise Escaped(f"orbit of {u.disk!r} leaves the cover after {n} steps")
        current, holder, container = img, cover[inside], inside
    raise CapExceeded(f"no cover disk reached from {u.disk!r} within {cap} steps")


def m_index(u: CoverDisk, cover: Sequence[CoverDisk], system: PiecewiseSystem, cap: int = 64) -> int:
    """Least n with f^n(u) containing a cover disk."""
    return _orbit(u, cover, system, cap)[0]


def markov_index(cover: Sequence[CoverDisk], system: PiecewiseSystem, cap: int = 64) -> int:
    return sum(m_index(c, cover, system, cap) - 1 for c in cover)


def _prune(cover: list[CoverDisk], system: PiecewiseSystem, cap: int, history: list) -> list[CoverDisk]:
    while True:
        gone = []
        for k, c in enumerate(cover):
            try:
                _orbit(c, cover, system, cap)
            except Escaped:
                gone.append(k)
            except CapExceeded as exc:
                raise CapExceeded(str(exc), index=None) from None
        if not gone:
            return cover
        history.append(PruneEvent(tuple(cover[k].disk for k in gone)))
        cover = [c for k, c in enumerate(cover) if k not in gone]


def refine_to_markov(
    system: PiecewiseSystem,
    cap_splits: int = 10_000,
    cap_m: int = 64,
    strict: bool = False,
) -> CoverState:
    """Split the piece domains until the cover has the Markov property.

    Each round discards escaping disks, then takes the first cover disk u
    with index m > 1 and splits the cover disk holding f^(m-1)(u) via that
    image, keeping the gap disks around pullbacks of cover disks. With
    ``strict`` the loop raises if a split changes the total index by
    anything other than -1; otherwise the drop is recorded in the history.
    """
    ctx = system.ctx
    history: list = []
    cover = [CoverDisk(pc.domain, k) for k, pc in enumerate(system.pieces)]
    n_splits = 0
    while True:
        cover = _prune(cover, system, cap_m, history)
        orbits = [_orbit(c, cover, system, cap_m) for c in cover]
        m_values = [o[0] for o in orbits]
        total = sum(m - 1 for m in m_values)
        if total == 0:
            return CoverState(cover, m_values, history)
        if n_splits >= cap_splits:
            raise CapExceeded(f"split cap {cap_splits} reached with index {total}", index=total)
        k = next(i for i, m in enumerate(m_values) if m > 1)
        _, via, j = orbits[k]
        source, target = cover[k].disk, cover[j]
        piece = system.pieces[target.piece]
        big = piece.image(target.disk, ctx)
        marked = [piece.preimage(c.disk, ctx) for c in cover if contains(big, c.disk, ctx)]
        outputs = split(target.disk, via, marked, ctx)
        cover = cover[:j] + [CoverDisk(d, target.piece) for d in outputs] + cover[j + 1 :]
        n_splits += 1
        try:
            after = markov_index(cover, system, cap_m)
        except NoCoverHit:
            after = -1
        history.append(SplitEvent(source, target.disk, via, tuple(outputs), total, after))
        if strict and after != total - 1:
            raise IndexLawViolation(f"split of {target.disk!r} via {via!r} moved the index {total} -> {after}")


@dataclass(frozen=True)
class AnalysisReport:
    adjacency: list[list[int]]
    zeta: RationalFunctionZ
    root: RootCertificate
    escaped: tuple[Disk, ...]
    warnings: tuple[str, ...]
    cover: tuple[Disk, ...]

    @property
    def entropy(self) -> zeta_mod.EntropyValue:
        return self.root.entropy()


def analyze(
    system: PiecewiseSystem,
    tol: Fraction = DEFAULT_TOL,
    cap_splits: int = 10_000,
    cap_m: int = 64,
) -> AnalysisReport:
    state = refine_to_markov(system, cap_splits=cap_splits, cap_m=cap_m)
    warnings = []
    if not state.cover:
        warnings.append("EmptyJulia")
        one = zeta_mod.IntPolynomial([1])
        zero = Fraction(0)
        return AnalysisReport(
            [], RationalFunctionZ(one, one), RootCertificate(one, zero, zero, zero), tuple(state.escaped), tuple(warnings), ()
        )
    for ev in state.splits:
        if ev.drop != 1:
            warnings.append(f"IndexDrop:{ev.drop}")
    a = adjacency(state.cover, system)
    return AnalysisReport(
        a,
        zeta_mod.zeta_sft(a),
        zeta_mod.leading_root(a, tol),
        tuple(state.escaped),
        tuple(warnings),
        tuple(state.disks),
    )


# --- serialization -------------------------------------------------------


def system_to_json(system: PiecewiseSystem) -> dict:
    out = {
        "p": system.ctx.p,
        "pieces": [
            {"domain": disk_to_json(pc.domain), "alpha": format_rational(pc.alpha), "beta": format_rational(pc.beta)}
            for pc in system.pieces
        ],
    }
    if system.sink is not None:
        out["sink"] = disk_to_json(system.sink)
    return out


def system_from_json(obj) -> PiecewiseSystem:
    if not isinstance(obj, dict) or "p" not in obj or not isinstance(obj.get("pieces"), list):
        raise InvalidSystem("system must be {'p':..,'pieces':[...]}")
    ctx = FieldContext(obj["p"])
    pieces = []
    for item in obj["pieces"]:
        try:
            pieces.append(AffinePiece(disk_from_json(item["domain"]), parse_rational(item["alpha"]), parse_rational(item["beta"])))
        except (KeyError, TypeError) as exc:
            raise InvalidSystem(f"malformed piece {item!r}") from exc
    sink = disk_from_json(obj["sink"]) if obj.get("sink") is not None else None
    return PiecewiseSystem(ctx, tuple(pieces), sink)


def report_to_json(report: AnalysisReport) -> dict:
    return {
        "adjacency": zeta_mod.matrix_to_json(report.adjacency),
        "zeta": zeta_mod.rational_function_to_json(report.zeta),
        "entropy": zeta_mod.entropy_to_json(report.root),
        "cover": [disk_to_json(d) for d in report.cover],
        "escaped": [disk_to_json(d) for d in report.escaped],
        "warnings": list(report.warnings),
    }
