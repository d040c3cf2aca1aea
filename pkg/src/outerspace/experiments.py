"""Experiment drivers: commutator orbits, the boundary family, S0 and orbit rigidity scans."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .automorphisms import Automorphism, apply, is_primitive, orbit_ball, whitehead_generators
from .candidates import theorem_c_witness
from .graphs import (
    MarkedMetricGraph,
    equal_in_cv,
    normalize_covolume,
    random_marked_graph,
    rose,
    translation_length,
)
from .tao import TaoTreePoint, tao_length
from .words import (
    Word,
    canonical_conjugacy,
    enumerate_cyclic_words,
    format_word,
    power,
    word_key,
)

COMMUTATOR: Word = (1, 2, -1, -2)
S0: tuple[Word, ...] = ((1,), (2,), (1, 2), (1, -2), COMMUTATOR)
TAO_SAMPLES = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))


@dataclass
class ExperimentConfig:
    seed: int = 7
    rank: int = 2
    trial_count: int = 200
    max_length: int = 8
    depth: int = 3
    tolerance: float = 1e-6
    max_radius: int = 5
    out: str | None = None

    def __post_init__(self):
        for name in ("rank", "trial_count", "max_length", "depth", "max_radius"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def rose_A() -> MarkedMetricGraph:
    """Unit rose marked by the basis {a, b}."""
    return rose(2)


def rose_B() -> MarkedMetricGraph:
    """Unit rose marked by the basis {a, ab}."""
    return rose(2, basis=[(1,), (1, 2)])


def sample_unequal_pairs(config: ExperimentConfig, normalize: bool = False):
    """Yield ``(trial, T, T2, equal)`` for ``config.trial_count`` seeded draws."""
    rng = random.Random(config.seed)
    for trial in range(config.trial_count):
        T = random_marked_graph(config.rank, rng)
        T2 = random_marked_graph(config.rank, rng)
        if normalize:
            T, T2 = normalize_covolume(T), normalize_covolume(T2)
        yield trial, T, T2, equal_in_cv(T, T2)


# -- commutator orbit ---------------------------------------------------------


@dataclass
class F2DemoReport:
    trees_equal: bool
    checked: int
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.trees_equal and not self.failures

    def to_dict(self) -> dict:
        return {"ok": self.ok, **asdict(self)}


def f2_commutator_demo(powers: Sequence[int] = (1, 2, 3), radius: int = 4) -> F2DemoReport:
    TA, TB = rose_A(), rose_B()
    report = F2DemoReport(equal_in_cv(TA, TB), 0)
    gens = whitehead_generators(2)
    for k in powers:
        g = power(COMMUTATOR, k)
        for w in sorted(orbit_ball(gens, g, radius), key=word_key):
            la, lb = translation_length(TA, w), translation_length(TB, w)
            report.checked += 1
            if not la == lb == 4 * abs(k):
                report.failures.append(
                    {"k": k, "word": format_word(w), "T_A": str(la), "T_B": str(lb)}
                )
    return report


# -- boundary family ----------------------------------------------------------


@dataclass
class TaoScanReport:
    max_length: int
    samples: list[str]
    primitives_scanned: int
    violations: list[dict] = field(default_factory=list)
    commutator_lengths: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, **asdict(self)}


def tao_primitive_scan(max_length: int = 8, samples: Iterable = TAO_SAMPLES) -> TaoScanReport:
    points = [TaoTreePoint(Fraction(t)) for t in samples]
    report = TaoScanReport(max_length, [str(p.t) for p in points], 0)
    for w in enumerate_cyclic_words(2, max_length):
        if not is_primitive(w, 2):
            continue
        report.primitives_scanned += 1
        values = {p.t: tao_length(p, w) for p in points}
        if len(set(values.values())) != 1:
            report.violations.append(
                {"word": format_word(w), "lengths": {str(t): str(v) for t, v in values.items()}}
            )
    report.commutator_lengths = {str(p.t): str(tao_length(p, COMMUTATOR)) for p in points}
    return report


# -- S0 sampler ---------------------------------------------------------------


@dataclass
class S0Report:
    seed: int
    trials: int
    skipped_equal: int
    violations: list[int] = field(default_factory=list)
    note: str = (
        "sampling only checks a necessary condition; agreement on S0 is not "
        "decided for all pairs"
    )

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, **asdict(self)}


def s0_witness(T: MarkedMetricGraph, T2: MarkedMetricGraph) -> Word | None:
    for w in S0:
        if translation_length(T, w) != translation_length(T2, w):
            return w
    return None


def s0_probe(config: ExperimentConfig) -> S0Report:
    if config.rank != 2:
        raise ValueError("S0 probe is defined for rank 2")
    report = S0Report(config.seed, config.trial_count, 0)
    for trial, T, T2, equal in sample_unequal_pairs(config, normalize=True):
        if equal:
            report.skipped_equal += 1
            continue
        if s0_witness(T, T2) is None:
            report.violations.append(trial)
    return report


# -- orbit rigidity scan ------------------------------------------------------


@dataclass
class PairResult:
    trial: int
    equal: bool
    radius: int | None = None
    discriminator: str | None = None
    theorem_c: str | None = None


@dataclass
class RigidityScanReport:
    element: str
    max_radius: int
    pairs: list[PairResult] = field(default_factory=list)

    @property
    def unequal(self) -> list[PairResult]:
        return [p for p in self.pairs if not p.equal]

    @property
    def discriminated(self) -> int:
        return sum(p.radius is not None for p in self.unequal)

    def radius_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for p in self.unequal:
            if p.radius is not None:
                hist[p.radius] = hist.get(p.radius, 0) + 1
        return dict(sorted(hist.items()))

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "max_radius": self.max_radius,
            "unequal_pairs": len(self.unequal),
            "discriminated": self.discriminated,
            "radius_histogram": {str(k): v for k, v in self.radius_histogram().items()},
            "pairs": [asdict(p) for p in self.pairs],
        }


def discriminating_radius(
    T: MarkedMetricGraph,
    T2: MarkedMetricGraph,
    gens: Sequence[Automorphism],
    g: Sequence[int],
    max_radius: int,
    cap: int = 200_000,
) -> tuple[int, Word] | None:
    """Smallest orbit radius holding a class whose lengths in ``T`` and ``T2`` differ."""
    moves = []
    seen_images = set()
    for m in gens:
        for x in (m, m.inverse()):
            if x.images not in seen_images:
                seen_images.add(x.images)
                moves.append(x)
    start = canonical_conjugacy(g)
    if translation_length(T, start) != translation_length(T2, start):
        return 0, start
    seen = {start}
    frontier = [start]
    for r in range(1, max_radius + 1):
        nxt = []
        for w in frontier:
            for m in moves:
                c = canonical_conjugacy(apply(m, w))
                if c in seen:
                    continue
                seen.add(c)
                nxt.append(c)
        nxt.sort(key=lambda w: (len(w), word_key(w)))
        for c in nxt:
            if translation_length(T, c) != translation_length(T2, c):
                return r, c
        if not nxt or len(seen) > cap:
            break
        frontier = nxt
    return None


def rigidity_scan(
    config: ExperimentConfig,
    gens: Sequence[Automorphism] | None,
    g: Sequence[int],
    pairs: Iterable[tuple[MarkedMetricGraph, MarkedMetricGraph]] | None = None,
) -> RigidityScanReport:
    """Search the orbit of ``g`` for an element telling the trees of each pair apart."""
    if gens is None:
        gens = whitehead_generators(config.rank)
    report = RigidityScanReport(format_word(g), config.max_radius)
    if pairs is None:
        source = ((t, T, T2, eq) for t, T, T2, eq in sample_unequal_pairs(config))
    else:
        source = ((t, T, T2, equal_in_cv(T, T2)) for t, (T, T2) in enumerate(pairs))
    for trial, T, T2, equal in source:
        result = PairResult(trial, equal)
        if not equal:
            found = discriminating_radius(T, T2, gens, g, config.max_radius)
            if found is not None:
                result.radius, w = found[0], found[1]
                result.discriminator = format_word(w)
            witness = theorem_c_witness(T, T2)
            result.theorem_c = None if witness is None else format_word(witness.word)
        report.pairs.append(result)
    return report
