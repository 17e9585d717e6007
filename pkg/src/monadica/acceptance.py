"""The self-test battery behind ``monadica selftest``.

Each check is a deterministic function of ``(seed, deep, jobs)`` returning a
:class:`CheckResult`; :func:`run_suite` renders them in a fixed order.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import algebra as alg
from . import frames as fr
from . import semantics as sem
from .search import GenConfig, diagram_test, nontheorem_hunt, random_formula, soundness_sweep
from .syntax import Formula, Logic, letters, parse, subformulas
from .translate import dagger, godel_t, natural, t_sharp


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}"


def _rng(seed: int, stream: int, index: int) -> random.Random:
    return random.Random((seed * 1_000_003 + stream) * 1_000_003 + index)


def _random_valuation(rng: random.Random, frame: fr.Frame, names) -> dict[str, int]:
    return {p: rng.randrange(1 << frame.n) for p in sorted(names)}


# -- 1 ---------------------------------------------------------------------------

def check_soundness(seed: int = 0, deep: bool = False, jobs: int = 1) -> CheckResult:
    n = 4 if deep else 3
    res = CheckResult(1, f"soundness sweep, every axiom on every frame up to {n} worlds", True)
    for cls in Logic:
        rep = soundness_sweep(cls, n, jobs)
        res.details.append(f"{cls.value}: {rep.summary['axioms']} axioms, {rep.failures} refuted")
        res.details.extend("  " + ln for ln in rep.lines if "REFUTED" in ln)
        res.passed &= rep.ok
    return res


# -- 2 ---------------------------------------------------------------------------

def _truth_lemma_godel(rng: random.Random) -> tuple[bool, str]:
    frames = fr.frames_up_to(3, Logic.MS4)
    frame = frames[rng.randrange(len(frames))]
    phi = random_formula(GenConfig(rng.getrandbits(32), 3, ("p", "q"), Logic.MIPC))
    v = _random_valuation(rng, frame, {"p", "q"})
    x = rng.randrange(frame.n)
    skel = fr.skeleton_ms4(frame)
    v2 = sem.pushforward_valuation(frame, v, skel.proj)
    left = sem.satisfies(skel.frame, Logic.MIPC, v2, skel.proj[x], phi)
    right = sem.satisfies(frame, Logic.MS4, v, x, godel_t(phi))
    return left == right, f"{phi} at {x} of {frame.rels}"


def _truth_lemma_natural(rng: random.Random) -> tuple[bool, str]:
    frames = fr.frames_up_to(3, Logic.TS4)
    frame = frames[rng.randrange(len(frames))]
    phi = random_formula(GenConfig(rng.getrandbits(32), 3, ("p", "q"), Logic.MIPC))
    v = _random_valuation(rng, frame, {"p", "q"})
    x = rng.randrange(frame.n)
    skel = fr.skeleton_ts4(frame)
    v2 = sem.pushforward_valuation(frame, v, skel.proj)
    left = sem.satisfies(skel.frame, Logic.MIPC, v2, skel.proj[x], phi)
    right = sem.satisfies(frame, Logic.TS4, v, x, natural(phi))
    return left == right, f"{phi} at {x} of {frame.rels}"


def _truth_lemma_dagger(rng: random.Random) -> tuple[bool, str]:
    frames = fr.frames_up_to(3, Logic.MS4T)
    frame = frames[rng.randrange(len(frames))]
    phi = random_formula(GenConfig(rng.getrandbits(32), 3, ("p", "q"), Logic.TS4))
    v = _random_valuation(rng, frame, {"p", "q"})
    x = rng.randrange(frame.n)
    left = sem.satisfies(fr.dagger_frame(frame), Logic.TS4, v, x, phi)
    right = sem.satisfies(frame, Logic.MS4T, v, x, dagger(phi))
    return left == right, f"{phi} at {x} of {frame.rels}"


TRUTH_LEMMAS: dict[str, Callable[[random.Random], tuple[bool, str]]] = {
    "skeleton vs t": _truth_lemma_godel,
    "skeleton vs natural": _truth_lemma_natural,
    "dagger frame vs dagger": _truth_lemma_dagger,
}


def check_truth_lemmas(seed: int = 0, deep: bool = False, jobs: int = 1,
                       samples: int = 200) -> CheckResult:
    res = CheckResult(2, f"truth lemmas, {samples} random quadruples each", True)
    for k, (name, fn) in enumerate(TRUTH_LEMMAS.items()):
        bad = []
        for i in range(samples):
            agree, where = fn(_rng(seed, 20 + k, i))
            if not agree:
                bad.append(where)
        res.details.append(f"{name}: {samples - len(bad)}/{samples} agree")
        res.details.extend("  disagreement: " + w for w in bad[:3])
        res.passed &= not bad
    return res


# -- 3 ---------------------------------------------------------------------------

def check_diagram(seed: int = 0, deep: bool = False, jobs: int = 1) -> CheckResult:
    rep = diagram_test(100, 3, 3, seed=seed, jobs=jobs)
    res = CheckResult(3, "diagram: t_sharp ~ natural_dagger and flat ~ t_sharp on 100 formulas", rep.ok)
    res.details.append(f"{100 - rep.failures}/100 formulas equivalent on all MS4T frames up to 3 worlds")
    res.details.extend("  " + ln for ln in rep.lines if "FAIL" in ln)
    return res


# -- 4 ---------------------------------------------------------------------------

RIGHT_COMMUTATIVITY = "A [F] p -> [F] A p"
FORALL_DISTRIBUTION = "A((A p)|q) -> (A p)|(A q)"


def e_vs_eqe_witness(n: int = 2) -> fr.Frame | None:
    """First MS4 frame whose E differs from the equivalence induced by R;E."""
    for frame in fr.enumerate_frames(n, Logic.MS4):
        qe = fr.q_e(frame)
        if fr.intersect(qe, fr.converse(qe)) != frame["E"]:
            return frame
    return None


def check_witnesses(seed: int = 0, deep: bool = False, jobs: int = 1) -> CheckResult:
    res = CheckResult(4, "non-theorem witnesses", True)
    for tag, cls, text in (("a", Logic.MS4T, RIGHT_COMMUTATIVITY),
                           ("b", Logic.MIPC, FORALL_DISTRIBUTION)):
        f = parse(text, cls)
        v = nontheorem_hunt(cls, f, 3, jobs)
        ok = isinstance(v, sem.Refuted) and v.frame.n == 3 and sem.reverify(v, cls, f)
        res.details.append(f"({tag}) {cls.value} {text}: {v}")
        res.passed &= ok
    w = e_vs_eqe_witness(2)
    ok = w is not None and fr.validate(w, Logic.MS4).ok
    if ok:
        qe = fr.q_e(w)
        ok = fr.intersect(qe, fr.converse(qe)) != w["E"]
        res.details.append(f"(c) MS4 frame R={fr.to_pairs(w['R'])} E={fr.to_pairs(w['E'])}: "
                           f"E_QE={fr.to_pairs(fr.intersect(qe, fr.converse(qe)))}")
    else:
        res.details.append("(c) no 2-world witness found")
    res.passed &= ok
    return res


# -- 5 ---------------------------------------------------------------------------

def _upsets_everywhere(cls: Logic, n: int, formula: Formula) -> bool:
    names = sorted(letters(formula))
    for frame in fr.frames_up_to(n, cls):
        values = sem.valuation_space(frame, cls, names)
        truth = sem.evaluate(frame, cls, formula, values)[formula]
        for x, row in enumerate(frame["R"]):
            holds = (truth >> x) & 1 == 1
            if np.any(holds & ((truth & row) != row)):
                return False
    return True


def check_upsets(seed: int = 0, deep: bool = False, jobs: int = 1,
                 samples: int = 200) -> CheckResult:
    res = CheckResult(5, f"upset lemmas on {samples} random formulas", True)
    bad_t, bad_ts = [], []
    for i in range(samples):
        phi = random_formula(GenConfig(seed * 1_000_003 + 50_000 + i, 3, ("p", "q"), Logic.MIPC))
        if not _upsets_everywhere(Logic.MS4, 3, godel_t(phi)):
            bad_t.append(str(phi))
        if not _upsets_everywhere(Logic.MS4T, 3, t_sharp(phi)):
            bad_ts.append(str(phi))
    res.details.append(f"t on MS4 frames: {samples - len(bad_t)}/{samples} upsets")
    res.details.append(f"t_sharp on MS4T frames: {samples - len(bad_ts)}/{samples} upsets")
    res.details.extend("  not an upset: " + s for s in (bad_t + bad_ts)[:3])
    res.passed = not bad_t and not bad_ts
    return res


# -- 6 ---------------------------------------------------------------------------

def round_trip_failures(frame: fr.Frame, cls: Logic) -> list[str]:
    """Names of the algebraic checks that fail on the complex algebra of ``frame``."""
    a = alg.complex_algebra(frame, cls)
    out = []
    rep = alg.check_axioms(a)
    if not rep.ok:
        return [f"axioms: {rep}"]
    if a.kind in (alg.AlgebraClass.MS4A, alg.AlgebraClass.MS4TA):
        rep = alg.equivalent_ms4_axioms(a)
        if not rep.ok:
            out.append(f"five identities: {rep}")
    if a.kind in (alg.AlgebraClass.MHA, alg.AlgebraClass.MS4A, alg.AlgebraClass.MS4TA):
        rep = alg.adjoint_check(a)
        if not rep.ok:
            out.append(f"adjoints: {rep}")
    if a.kind in (alg.AlgebraClass.S4TA, alg.AlgebraClass.TS4A, alg.AlgebraClass.MS4TA):
        rep = alg.dual_iso_check(a)
        if not rep.ok:
            out.append(f"dual iso: {rep}")
    if not alg.stone_check(a):
        out.append("stone map")
    return out


def check_algebra(seed: int = 0, deep: bool = False, jobs: int = 1) -> CheckResult:
    res = CheckResult(6, "algebra round trip on every frame up to 3 worlds", True)
    for cls in Logic:
        frames = fr.frames_up_to(3, cls)
        bad = [(f, msgs) for f in frames if (msgs := round_trip_failures(f, cls))]
        res.details.append(f"{cls.value}: {len(frames) - len(bad)}/{len(frames)} frames pass")
        res.details.extend(f"  {f.rels}: {'; '.join(m)}" for f, m in bad[:3])
        res.passed &= not bad
    return res


# -- 7 ---------------------------------------------------------------------------

def refuted_term(rng: random.Random, a: alg.FiniteAlgebra,
                 attempts: int = 1000) -> tuple[Formula, dict[str, int]] | None:
    """A random MS4T term and assignment whose value is not top."""
    for _ in range(attempts):
        t = random_formula(GenConfig(rng.getrandbits(32), 3, ("p", "q"), Logic.MS4T))
        assignment = {p: rng.randrange(a.size) for p in sorted(letters(t))}
        if alg.eval_term(a, t, assignment) != a.top:
            return t, assignment
    return None


def shrink_agrees(a: alg.FiniteAlgebra, t: Formula, assignment: dict[str, int]) -> list[str]:
    """Problems found when evaluating ``t`` in the shrunk algebra seeded by its subterm values."""
    ambient = alg.eval_terms(a, t, assignment)
    small = alg.shrink(a, set(ambient.values()))
    problems = []
    rep = alg.check_axioms(small)
    if not rep.ok:
        problems.append(f"shrunk algebra fails axioms: {rep}")
    pos = {label: i for i, label in enumerate(small.labels)}
    local = alg.eval_terms(small, t, {p: pos[v] for p, v in assignment.items()})
    for s in subformulas(t):
        if small.labels[local[s]] != ambient[s]:
            problems.append(f"subterm {s} differs")
            break
    if local[t] == small.top:
        problems.append("term became top")
    return problems


def check_shrink(seed: int = 0, deep: bool = False, jobs: int = 1,
                 samples: int = 50) -> CheckResult:
    res = CheckResult(7, f"finite shrink on {samples} refuted terms", True)
    frames = fr.frames_up_to(3, Logic.MS4T)
    done = 0
    sizes = []
    for i in range(samples):
        rng = _rng(seed, 70, i)
        frame = frames[rng.randrange(len(frames))]
        a = alg.complex_algebra(frame, Logic.MS4T)
        found = refuted_term(rng, a)
        if found is None:
            res.details.append(f"  sample {i}: no refuted term found")
            res.passed = False
            continue
        problems = shrink_agrees(a, *found)
        done += not problems
        sizes.append(len(alg.s5_subalgebra(a, set(alg.eval_terms(a, *found).values()))))
        res.details.extend(f"  sample {i} [{found[0]}]: {p}" for p in problems)
        res.passed &= not problems
    res.details.insert(0, f"{done}/{samples} samples agree; shrunk carrier sizes "
                          f"{min(sizes, default=0)}..{max(sizes, default=0)}")
    return res


# -- 8 ---------------------------------------------------------------------------

def transport_failures(phi: Formula, witness: sem.Refuted) -> list[str]:
    """Does the MIPC countermodel carry over to the t and natural translations?"""
    out = []
    g, v, x = witness.frame, witness.valuation, witness.world
    ms4 = fr.ms4_of_mipc(g)
    if ms4.n != g.n or sem.satisfies(ms4, Logic.MS4, v, x, godel_t(phi)):
        out.append("t")
    ts4 = g.retag(Logic.TS4)
    if not fr.validate(ts4).ok or sem.satisfies(ts4, Logic.TS4, v, x, natural(phi)):
        out.append("natural")
    return out


def check_transport(seed: int = 0, deep: bool = False, jobs: int = 1,
                    samples: int = 100) -> CheckResult:
    res = CheckResult(8, f"fullness transport on {samples} refuted MIPC formulas", True)
    found = tried = 0
    while found < samples and tried < 50 * samples:
        phi = random_formula(GenConfig(seed * 1_000_003 + 80_000 + tried, 3, ("p", "q"), Logic.MIPC))
        tried += 1
        v = sem.valid_up_to(Logic.MIPC, 3, phi)
        if isinstance(v, sem.Valid):
            continue
        found += 1
        bad = transport_failures(phi, v)
        res.details.extend(f"  [{phi}] lost under {b}" for b in bad)
        res.passed &= not bad
    res.details.insert(0, f"{found} refuted formulas out of {tried} sampled")
    res.passed &= found == samples
    return res


# -- suite -------------------------------------------------------------------------

CHECKS: list[Callable[..., CheckResult]] = [
    check_soundness, check_truth_lemmas, check_diagram, check_witnesses,
    check_upsets, check_algebra, check_shrink, check_transport,
]


def render(results: list[CheckResult], seed: int, deep: bool) -> str:
    lines = [f"selftest seed={seed} deep={deep}"]
    for r in results:
        lines.append(r.line())
        lines.extend("    " + d for d in r.details)
    return "\n".join(lines) + "\n"


def _run_one(args: tuple[int, int, bool]) -> CheckResult:
    index, seed, deep = args
    return CHECKS[index](seed=seed, deep=deep, jobs=1)


def run_checks(seed: int = 0, deep: bool = False, jobs: int = 1) -> list[CheckResult]:
    """Run every check; with ``jobs > 1`` the checks themselves run side by side."""
    if jobs <= 1:
        return [check(seed=seed, deep=deep, jobs=1) for check in CHECKS]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, [(i, seed, deep) for i in range(len(CHECKS))]))


def check_determinism(seed: int, deep: bool, reference: str) -> CheckResult:
    res = CheckResult(9, "determinism: identical reports on rerun and with 4 jobs", True)
    for jobs in (1, 4):
        again = render(run_checks(seed, deep, jobs), seed, deep)
        same = again == reference
        res.details.append(f"rerun with jobs={jobs}: {'identical' if same else 'DIFFERS'}")
        res.passed &= same
    return res


def run_suite(seed: int = 0, deep: bool = False, jobs: int = 1,
              determinism: bool = True) -> tuple[str, bool]:
    """Full report text and overall verdict."""
    results = run_checks(seed, deep, jobs)
    if determinism:
        results.append(check_determinism(seed, deep, render(results, seed, deep)))
    passed = sum(r.passed for r in results)
    text = render(results, seed, deep)
    text += f"SUMMARY: {passed}/{len(results)} checks passed\n"
    return text, passed == len(results)


__all__ = [
    "CheckResult", "CHECKS", "run_checks", "run_suite", "render",
    "check_soundness", "check_truth_lemmas", "check_diagram", "check_witnesses",
    "check_upsets", "check_algebra", "check_shrink", "check_transport",
    "check_determinism", "e_vs_eqe_witness", "round_trip_failures",
    "refuted_term", "shrink_agrees", "transport_failures",
]
