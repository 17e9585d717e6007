"""Model checking and bounded validity over finite frames.

Truth sets are world bitmasks.  A formula is evaluated bottom-up over its
distinct subformulas, vectorised with numpy across every valuation of its
letters at once, so a whole frame is checked in one pass.

Search order is fixed: frames by size then stream index, valuations by
counting with the alphabetically first letter most significant, worlds
ascending.  The first refutation in that order is the one reported.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from . import frames as fr
from .frames import Frame, Rows
from .syntax import (
    And, Bottom, Box, BoxF, BoxP, Dia, DiaF, DiaP, Exists, Forall, Formula,
    Implies, InadmissibleError, Letter, Logic, Not, Or, iff, letters, require,
    subformulas,
)

_UNIVERSAL = (Forall, Box, BoxF, BoxP)


@dataclass(frozen=True)
class Valid:
    bound: int

    def __str__(self) -> str:
        return f"no countermodel up to {self.bound} worlds"


@dataclass(frozen=True)
class Refuted:
    frame: Frame
    valuation: dict[str, int]
    world: int

    def __str__(self) -> str:
        vals = ", ".join(
            f"{p}={{{','.join(map(str, fr.members(m)))}}}" for p, m in sorted(self.valuation.items())
        )
        return f"refuted at world {self.world} of a {self.frame.n}-world {self.frame.cls.value} frame [{vals}]"


Verdict = Union[Valid, Refuted]


# -- evaluation ------------------------------------------------------------------

def _accessibility(node: Formula, cls: Logic, frame: Frame) -> Rows:
    """Relation (as rows) interpreting a modal node in class ``cls``."""
    t = type(node)
    if t in (Forall, Exists):
        if cls is Logic.MIPC:
            return frame["Q"] if t is Forall else frame.eq_rows
        return frame["E"]
    if t in (Box, Dia):
        return frame["R"]
    future = frame["R"] if cls is Logic.MS4T else frame["Q"]
    if t in (BoxF, DiaF):
        return future
    key = "R" if cls is Logic.MS4T else "Q"
    return frame.conv[key]


def _box(rows: Rows, a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for x, row in enumerate(rows):
        out |= ((a & row) == row).astype(np.int64) << x
    return out


def _dia(rows: Rows, a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for x, row in enumerate(rows):
        out |= ((a & row) != 0).astype(np.int64) << x
    return out


def _int_implies(rows: Rows, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    bad = a & ~b
    out = np.zeros_like(a)
    for x, row in enumerate(rows):
        out |= ((bad & row) == 0).astype(np.int64) << x
    return out


def evaluate(frame: Frame, cls: Logic, formula: Formula,
             values: Mapping[str, np.ndarray]) -> dict[Formula, np.ndarray]:
    """Truth-set arrays of every subformula, one entry per valuation column."""
    full = fr.full_set(frame.n)
    size = len(next(iter(values.values()))) if values else 1
    out: dict[Formula, np.ndarray] = {}
    for node in subformulas(formula):
        if isinstance(node, Bottom):
            res = np.zeros(size, dtype=np.int64)
        elif isinstance(node, Letter):
            res = values[node.name]
        elif isinstance(node, And):
            res = out[node.left] & out[node.right]
        elif isinstance(node, Or):
            res = out[node.left] | out[node.right]
        elif isinstance(node, Implies):
            a, b = out[node.left], out[node.right]
            if cls is Logic.MIPC:
                res = _int_implies(frame["R"], a, b)
            else:
                res = (~a | b) & full
        elif isinstance(node, Not):
            a = out[node.child]
            if cls is Logic.MIPC:
                res = _int_implies(frame["R"], a, np.zeros_like(a))
            else:
                res = ~a & full
        else:
            rows = _accessibility(node, cls, frame)
            sub = out[node.child]
            res = _box(rows, sub) if isinstance(node, _UNIVERSAL) else _dia(rows, sub)
        out[node] = res
    return out


def _check_class(frame: Frame, cls: Logic, formula: Formula) -> None:
    require(formula, cls)
    missing = [k for k in fr.REQUIRED[cls] if k not in frame.rels]
    if missing:
        raise fr.FrameError(f"{cls.value} semantics needs relation(s) {', '.join(missing)}")


def _check_valuation(frame: Frame, cls: Logic, valuation: Mapping[str, int],
                     names: Sequence[str]) -> None:
    for p in names:
        if p not in valuation:
            raise ValueError(f"valuation does not assign letter {p!r}")
        mask = valuation[p]
        if mask < 0 or mask >> frame.n:
            raise ValueError(f"valuation of {p!r} is not a subset of the worlds")
        if cls is Logic.MIPC and fr.image(frame["R"], mask) | mask != mask:
            raise ValueError(f"valuation of {p!r} is not an R-upset")


def truth_set(frame: Frame, cls: Logic, valuation: Mapping[str, int], formula: Formula) -> int:
    """Set of worlds (bitmask) where ``formula`` holds under ``valuation``."""
    _check_class(frame, cls, formula)
    names = sorted(letters(formula))
    _check_valuation(frame, cls, valuation, names)
    values = {p: np.array([valuation[p]], dtype=np.int64) for p in names}
    return int(evaluate(frame, cls, formula, values)[formula][0])


def satisfies(frame: Frame, cls: Logic, valuation: Mapping[str, int], world: int,
              formula: Formula) -> bool:
    if not 0 <= world < frame.n:
        raise ValueError(f"world {world} outside 0..{frame.n - 1}")
    return bool(truth_set(frame, cls, valuation, formula) >> world & 1)


def valuation_space(frame: Frame, cls: Logic, names: Sequence[str]) -> dict[str, np.ndarray]:
    """Every class-respecting valuation of ``names``, as parallel columns."""
    if cls is Logic.MIPC:
        choices = np.array(frame.r_upsets, dtype=np.int64)
    else:
        choices = np.arange(1 << frame.n, dtype=np.int64)
    if not names:
        return {}
    grid = np.indices((len(choices),) * len(names)).reshape(len(names), -1)
    return {p: choices[grid[i]] for i, p in enumerate(names)}


def _first_failure(frame: Frame, cls: Logic, formula: Formula) -> Refuted | None:
    names = sorted(letters(formula))
    values = valuation_space(frame, cls, names)
    truth = evaluate(frame, cls, formula, values)[formula]
    full = fr.full_set(frame.n)
    failing = np.flatnonzero(truth != full)
    if failing.size == 0:
        return None
    i = int(failing[0])
    holes = full & ~int(truth[i])
    world = next(fr.members(holes))
    return Refuted(frame, {p: int(values[p][i]) for p in names}, world)


def valid_on_frame(frame: Frame, cls: Logic | None, formula: Formula) -> Verdict:
    cls = cls or frame.cls
    _check_class(frame, cls, formula)
    return _first_failure(frame, cls, formula) or Valid(frame.n)


def _scan(args: tuple[Sequence[Frame], Logic, Formula, int]) -> tuple[int, Refuted] | None:
    chunk, cls, formula, offset = args
    for i, frame in enumerate(chunk):
        hit = _first_failure(frame, cls, formula)
        if hit is not None:
            return offset + i, hit
    return None


def valid_up_to(cls: Logic, n: int, formula: Formula, jobs: int = 1) -> Verdict:
    """Search every frame of ``cls`` with at most ``n`` worlds for a countermodel.

    ``Valid(n)`` only means no countermodel of that size exists.  With
    ``jobs > 1`` the frame stream is split across processes and the
    globally first refutation is still the one returned.
    """
    require(formula, cls)
    frames = fr.frames_up_to(n, cls)
    if jobs <= 1 or len(frames) < 2 * jobs:
        hit = _scan((frames, cls, formula, 0))
    else:
        step = -(-len(frames) // jobs)
        tasks = [(frames[i:i + step], cls, formula, i) for i in range(0, len(frames), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = [h for h in pool.map(_scan, tasks) if h is not None]
        hit = min(hits, key=lambda h: h[0]) if hits else None
    return hit[1] if hit else Valid(n)


def equivalent_up_to(cls: Logic, n: int, a: Formula, b: Formula, jobs: int = 1) -> Verdict:
    return valid_up_to(cls, n, iff(a, b), jobs)


def reverify(verdict: Verdict, cls: Logic, formula: Formula) -> bool:
    """True iff a refutation really falsifies ``formula`` (Valid passes trivially)."""
    if isinstance(verdict, Valid):
        return True
    return not satisfies(verdict.frame, cls, verdict.valuation, verdict.world, formula)


# -- skeleton valuations --------------------------------------------------------------

def pushforward_valuation(frame: Frame, valuation: Mapping[str, int],
                          proj: Sequence[int] | None = None) -> dict[str, int]:
    """Valuation on the skeleton: a cluster gets ``p`` iff its whole R-cone has ``p``."""
    r = frame["R"]
    if proj is None:
        proj = fr.clusters(r)
    out: dict[str, int] = {}
    for p, mask in valuation.items():
        acc = 0
        for x in range(frame.n):
            if r[x] & ~mask == 0:
                acc |= 1 << proj[x]
        out[p] = acc
    return out


def is_upset(rows: Rows, mask: int) -> bool:
    return fr.image(rows, mask) | mask == mask


__all__ = [
    "Valid", "Refuted", "Verdict", "evaluate", "truth_set", "satisfies",
    "valuation_space", "valid_on_frame", "valid_up_to", "equivalent_up_to",
    "reverify", "pushforward_valuation", "is_upset", "InadmissibleError",
]
