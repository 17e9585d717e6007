"""Random formulas, hard-coded axiom lists, and the sweep drivers.

Every driver returns a :class:`SweepReport` whose rendering is a pure
function of its inputs (no timings, no hostnames), so two runs with the
same seed are byte-identical whatever the worker count.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

from . import semantics as sem
from .syntax import (
    ADMISSIBLE, BOTTOM, And, Formula, Implies, Letter, Logic, Not, Or, parse,
)
from .translate import godel_t, natural, t_sharp, natural_dagger, flat

T = TypeVar("T")
R = TypeVar("R")


# -- axiom suites ------------------------------------------------------------------

def _s4(box: str) -> list[tuple[str, str]]:
    return [
        (f"K{box}", f"{box}(p -> q) -> {box}p -> {box}q"),
        (f"T{box}", f"{box}p -> p"),
        (f"4{box}", f"{box}p -> {box}{box}p"),
    ]


def _s5_forall() -> list[tuple[str, str]]:
    return [*_s4("A "), ("5A", "E p -> A E p")]


_TENSE = [("PF", "p -> [P]<F>p"), ("FP", "p -> [F]<P>p")]

_IPC = [
    ("IPC-1", "p -> q -> p"),
    ("IPC-2", "(p -> q -> r) -> (p -> q) -> p -> r"),
    ("IPC-3", "p & q -> p"),
    ("IPC-4", "p & q -> q"),
    ("IPC-5", "p -> q -> p & q"),
    ("IPC-6", "p -> p | q"),
    ("IPC-7", "q -> p | q"),
    ("IPC-8", "(p -> r) -> (q -> r) -> p | q -> r"),
    ("IPC-9", "false -> p"),
]

_RAW_SUITE: dict[Logic, list[tuple[str, str]]] = {
    Logic.MIPC: _IPC + [
        ("MIPC-2a", "A(p & q) <-> A p & A q"),
        ("MIPC-2b", "A p -> p"),
        ("MIPC-2c", "A p -> A A p"),
        ("MIPC-3a", "E(p | q) <-> E p | E q"),
        ("MIPC-3b", "p -> E p"),
        ("MIPC-3c", "E E p -> E p"),
        ("MIPC-3d", "E p & E q -> E(E p & q)"),
        ("MIPC-4a", "E A p <-> A p"),
        ("MIPC-4b", "E p <-> A E p"),
    ],
    Logic.MS4: [
        *(("MS4-" + k, v) for k, v in _s4("[]")),
        *(("MS4-" + k.strip(), v) for k, v in _s5_forall()),
        ("MS4-LC", "[]A p -> A []p"),
    ],
    Logic.S4T: [
        *(("S4T-" + k, v) for k, v in _s4("[F]") + _s4("[P]") + _TENSE),
    ],
    Logic.TS4: [
        *(("TS4-" + k, v) for k, v in _s4("[]") + _s4("[F]") + _s4("[P]") + _TENSE),
        ("TS4-T1", "<>p -> <F>p"),
        ("TS4-T2", "<F>p -> <>(<F>p & <P>p)"),
    ],
    Logic.MS4T: [
        *(("MS4T-" + k, v) for k, v in _s4("[F]") + _s4("[P]") + _TENSE),
        *(("MS4T-" + k.strip(), v) for k, v in _s5_forall()),
        ("MS4T-LC", "[F]A p -> A [F]p"),
    ],
}


class AxiomSuite:
    """Named axioms of each logic, parsed once."""

    def __init__(self):
        self._items = {
            cls: [(name, parse(text, cls)) for name, text in items]
            for cls, items in _RAW_SUITE.items()
        }

    def __getitem__(self, cls: Logic) -> list[tuple[str, Formula]]:
        return list(self._items[cls])

    def names(self, cls: Logic) -> list[str]:
        return [name for name, _ in self._items[cls]]


AXIOMS = AxiomSuite()


# -- random formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_depth: int = 3
    letters: tuple[str, ...] = ("p", "q")
    language: Logic = Logic.MIPC

    def at(self, index: int) -> "GenConfig":
        """Config for the ``index``-th sample of a stream; independent of worker layout."""
        return GenConfig(self.seed * 1_000_003 + index, self.max_depth, self.letters, self.language)


def _atom(rng: random.Random, cfg: GenConfig) -> Formula:
    if rng.random() < 0.1:
        return BOTTOM
    return Letter(rng.choice(cfg.letters))


def _grow(rng: random.Random, cfg: GenConfig, depth: int) -> Formula:
    if depth == 0:
        return _atom(rng, cfg)
    roll = rng.random()
    if roll < 0.25:
        return _atom(rng, cfg)
    if roll < 0.65:
        node = rng.choice((And, Or, Implies))
        return node(_grow(rng, cfg, depth - 1), _grow(rng, cfg, depth - 1))
    choices = sorted(ADMISSIBLE[cfg.language], key=lambda c: c.__name__)
    if not cfg.language.intuitionistic:
        choices.append(Not)
    return rng.choice(choices)(_grow(rng, cfg, depth - 1))


def random_formula(cfg: GenConfig) -> Formula:
    """Admissible formula of depth at most ``cfg.max_depth``, a pure function of ``cfg``."""
    return _grow(random.Random(cfg.seed), cfg, cfg.max_depth)


def sample(cfg: GenConfig, count: int) -> list[Formula]:
    return [random_formula(cfg.at(i)) for i in range(count)]


# -- reports -----------------------------------------------------------------------

@dataclass
class SweepReport:
    driver: str
    lines: list[str] = field(default_factory=list)
    summary: dict[str, object] = field(default_factory=dict)
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def render(self) -> str:
        out = [f"== {self.driver} =="]
        out.extend(self.lines)
        out.append("-- summary --")
        out.append(f"driver: {self.driver}")
        out.extend(f"{k}: {v}" for k, v in self.summary.items())
        out.append(f"failures: {self.failures}")
        out.append(f"status: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(out) + "\n"

    def __str__(self) -> str:
        return self.render()


def ordered_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """``map`` with an optional process pool; results keep input order."""
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _verdict_text(v: sem.Verdict) -> str:
    return f"valid({v.bound})" if isinstance(v, sem.Valid) else f"REFUTED {v}"


# -- drivers ---------------------------------------------------------------------

def soundness_sweep(cls: Logic, n: int, jobs: int = 1) -> SweepReport:
    """Every axiom of ``cls`` must hold on every frame of ``cls`` up to ``n`` worlds."""
    report = SweepReport("soundness", summary={"class": cls.value, "bound": n})
    items = AXIOMS[cls]
    for name, f in items:
        v = sem.valid_up_to(cls, n, f, jobs)
        if isinstance(v, sem.Refuted):
            report.failures += 1
        report.lines.append(f"{name}: {_verdict_text(v)}  [{f}]")
    report.summary["axioms"] = len(items)
    return report


def nontheorem_hunt(cls: Logic, formula: Formula, n: int, jobs: int = 1) -> sem.Verdict:
    """Exhaustive countermodel search; ``Valid(n)`` means inconclusive here."""
    v = sem.valid_up_to(cls, n, formula, jobs)
    if not sem.reverify(v, cls, formula):
        raise RuntimeError(f"countermodel for {formula} does not re-verify")
    return v


def _diagram_one(args: tuple[Formula, int]) -> tuple[sem.Verdict, sem.Verdict]:
    chi, n = args
    ts = t_sharp(chi)
    first = sem.equivalent_up_to(Logic.MS4T, n, ts, natural_dagger(chi))
    second = sem.equivalent_up_to(Logic.MS4T, n, flat(chi), ts)
    return first, second


def diagram_test(sample_size: int, depth: int, n: int, seed: int = 0,
                 jobs: int = 1, letters: Iterable[str] = ("p", "q")) -> SweepReport:
    """The three MIPC -> MS4T routes must agree on random formulas."""
    cfg = GenConfig(seed, depth, tuple(letters), Logic.MIPC)
    formulas = sample(cfg, sample_size)
    results = ordered_map(_diagram_one, [(f, n) for f in formulas], jobs)
    report = SweepReport("diagram", summary={
        "samples": sample_size, "depth": depth, "bound": n, "seed": seed})
    for i, (chi, (a, b)) in enumerate(zip(formulas, results)):
        bad = [label for label, v in (("t_sharp~natural_dagger", a), ("flat~t_sharp", b))
               if isinstance(v, sem.Refuted)]
        report.failures += bool(bad)
        status = "ok" if not bad else "FAIL " + ",".join(bad)
        report.lines.append(f"#{i} {status}  [{chi}]")
    return report


def _faithful_one(args: tuple[Formula, int]) -> tuple[sem.Verdict, ...]:
    phi, n = args
    return (
        sem.valid_up_to(Logic.MIPC, n, phi),
        sem.valid_up_to(Logic.MS4, n, godel_t(phi)),
        sem.valid_up_to(Logic.TS4, n, natural(phi)),
        sem.valid_up_to(Logic.MS4T, n, t_sharp(phi)),
    )


def faithfulness_spot(sample_size: int, depth: int, n: int, seed: int = 0,
                      jobs: int = 1) -> SweepReport:
    """Compare bounded verdicts of a MIPC formula and its three translations.

    A MIPC refutation with some translation still valid at the same bound is
    a failure.  The other way round only means the source countermodel may
    need more worlds, so it is counted as inconclusive.
    """
    cfg = GenConfig(seed, depth, ("p", "q"), Logic.MIPC)
    formulas = sample(cfg, sample_size)
    results = ordered_map(_faithful_one, [(f, n) for f in formulas], jobs)
    report = SweepReport("faithfulness", summary={
        "samples": sample_size, "depth": depth, "bound": n, "seed": seed})
    inconclusive = refuted = 0
    for i, (phi, verdicts) in enumerate(zip(formulas, results)):
        marks = "".join("R" if isinstance(v, sem.Refuted) else "v" for v in verdicts)
        if marks[0] == "R":
            refuted += 1
            status = "ok" if marks == "RRRR" else "FAIL"
            report.failures += status == "FAIL"
        else:
            status = "ok" if marks == "vvvv" else "inconclusive"
            inconclusive += status == "inconclusive"
        report.lines.append(f"#{i} {marks} {status}  [{phi}]")
    report.summary["refuted"] = refuted
    report.summary["inconclusive"] = inconclusive
    report.summary["legend"] = "MIPC,MS4(t),TS4(natural),MS4T(t_sharp); R=refuted v=valid"
    report.summary["rule"] = ("MIPC refuted with a valid translation fails; "
                              "a translation refuted with MIPC valid is inconclusive")
    return report


__all__ = [
    "AxiomSuite", "AXIOMS", "GenConfig", "random_formula", "sample",
    "SweepReport", "ordered_map", "soundness_sweep", "nontheorem_hunt",
    "diagram_test", "faithfulness_spot",
]
