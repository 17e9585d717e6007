"""Finite frames: validation, derived relations, skeletons, enumeration.

A relation on ``n`` worlds is stored as a boolean matrix encoded row-wise:
``rows[x]`` is an int whose bit ``y`` is set iff ``x`` is related to ``y``.
Nothing is ever closed implicitly; validators report, they do not repair.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .syntax import Logic

Rows = tuple[int, ...]

DEFAULT_MAX_N = 4

REQUIRED: dict[Logic, tuple[str, ...]] = {
    Logic.MIPC: ("R", "Q"),
    Logic.TS4: ("R", "Q"),
    Logic.MS4: ("R", "E"),
    Logic.MS4T: ("R", "E"),
    Logic.S4T: ("Q",),
}


class FrameError(ValueError):
    pass


class BoundError(ValueError):
    pass


def max_n() -> int:
    """Enumeration cap; ``MONADICA_MAX_N`` overrides the default of 4."""
    raw = os.environ.get("MONADICA_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise BoundError(f"MONADICA_MAX_N must be an integer, got {raw!r}") from None


def check_bound(n: int) -> None:
    cap = max_n()
    if not 1 <= n <= cap:
        raise BoundError(f"frame size {n} outside 1..{cap} (set MONADICA_MAX_N to raise the cap)")


# -- relation algebra on row bitmasks ----------------------------------------

def full_set(n: int) -> int:
    return (1 << n) - 1


def members(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def identity(n: int) -> Rows:
    return tuple(1 << i for i in range(n))


def total(n: int) -> Rows:
    return (full_set(n),) * n


def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Rows:
    rows = [0] * n
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise FrameError(f"edge ({a},{b}) outside worlds 0..{n - 1}")
        rows[a] |= 1 << b
    return tuple(rows)


def to_pairs(rows: Rows) -> list[tuple[int, int]]:
    return [(x, y) for x, row in enumerate(rows) for y in members(row)]


def converse(rows: Rows) -> Rows:
    n = len(rows)
    out = [0] * n
    for x, row in enumerate(rows):
        for y in members(row):
            out[y] |= 1 << x
    return tuple(out)


def compose(first: Rows, second: Rows) -> Rows:
    """``x (first;second) y`` iff some ``z`` has ``x first z`` and ``z second y``."""
    out = []
    for row in first:
        acc = 0
        for z in members(row):
            acc |= second[z]
        out.append(acc)
    return tuple(out)


def intersect(a: Rows, b: Rows) -> Rows:
    return tuple(x & y for x, y in zip(a, b))


def image(rows: Rows, subset: int) -> int:
    acc = 0
    for x in members(subset):
        acc |= rows[x]
    return acc


def preimage(rows: Rows, subset: int) -> int:
    acc = 0
    for x, row in enumerate(rows):
        if row & subset:
            acc |= 1 << x
    return acc


def is_reflexive(rows: Rows) -> bool:
    return all(row >> x & 1 for x, row in enumerate(rows))


def is_transitive(rows: Rows) -> bool:
    return all(rows[y] | row == row for row in rows for y in members(row))


def is_quasi_order(rows: Rows) -> bool:
    return is_reflexive(rows) and is_transitive(rows)


def is_symmetric(rows: Rows) -> bool:
    return rows == converse(rows)


def is_antisymmetric(rows: Rows) -> bool:
    return all(not (rows[y] >> x & 1) for x, row in enumerate(rows)
               for y in members(row) if y != x)


def is_subrelation(a: Rows, b: Rows) -> bool:
    return all(x & ~y == 0 for x, y in zip(a, b))


def upsets(rows: Rows) -> tuple[int, ...]:
    """All subsets closed under ``rows``, ascending as integers."""
    n = len(rows)
    return tuple(u for u in range(1 << n) if image(rows, u) | u == u)


# -- frames --------------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """``n`` worlds ``0..n-1`` and named relations drawn from R, Q, E."""

    n: int
    rels: Mapping[str, Rows]
    cls: Logic
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rels = dict(sorted((k, tuple(v)) for k, v in self.rels.items()))
        object.__setattr__(self, "rels", rels)
        limit = full_set(self.n)
        for key, rows in rels.items():
            if key not in ("R", "Q", "E"):
                raise FrameError(f"unknown relation name {key!r}")
            if len(rows) != self.n or any(r & ~limit for r in rows):
                raise FrameError(f"relation {key} is not a {self.n}x{self.n} matrix")
        missing = [k for k in REQUIRED[self.cls] if k not in rels]
        if missing:
            raise FrameError(f"{self.cls.value} frame needs relation(s) {', '.join(missing)}")

    def __hash__(self) -> int:
        return hash((self.n, self.cls, tuple(self.rels.items())))

    @classmethod
    def from_edges(cls, n: int, frame_class: Logic, name: str = "",
                   **edges: Iterable[tuple[int, int]]) -> "Frame":
        return cls(n, {k: from_pairs(n, v) for k, v in edges.items()}, frame_class, name)

    def __getitem__(self, key: str) -> Rows:
        try:
            return self.rels[key]
        except KeyError:
            raise FrameError(f"frame has no relation {key!r}") from None

    def matrix(self, key: str) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(bool(row >> y & 1) for y in range(self.n)) for row in self[key])

    def has(self, key: str, a: int, b: int) -> bool:
        return bool(self[key][a] >> b & 1)

    def retag(self, cls: Logic) -> "Frame":
        """Same relations read as a frame of another class."""
        return Frame(self.n, self.rels, cls, self.name)

    @property
    def worlds(self) -> range:
        return range(self.n)

    # derived relations, memoised per instance
    @cached_property
    def conv(self) -> dict[str, Rows]:
        return {k: converse(v) for k, v in self.rels.items()}

    @cached_property
    def eq_rows(self) -> Rows:
        return e_q(self)

    @cached_property
    def r_upsets(self) -> tuple[int, ...]:
        return upsets(self["R"])


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.condition} fails at {self.witness}"


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def e_q(frame: Frame) -> Rows:
    """``x E_Q y`` iff ``x Q y`` and ``y Q x``."""
    q = frame["Q"]
    return intersect(q, converse(q))


def q_e(frame: Frame) -> Rows:
    """``x Q_E y`` iff ``x R z`` and ``z E y`` for some ``z``."""
    return compose(frame["R"], frame["E"])


def _order_checks(rows: Rows, key: str, kind: str, out: list[Violation]) -> None:
    n = len(rows)
    for x in range(n):
        if not rows[x] >> x & 1:
            out.append(Violation(f"{key} reflexive", (x,)))
            break
    found = False
    for x in range(n):
        for y in members(rows[x]):
            for z in members(rows[y]):
                if not rows[x] >> z & 1:
                    out.append(Violation(f"{key} transitive", (x, y, z)))
                    found = True
                    break
            if found:
                break
        if found:
            break
    if kind == "partial":
        for x, y in itertools.combinations(range(n), 2):
            if rows[x] >> y & 1 and rows[y] >> x & 1:
                out.append(Violation(f"{key} antisymmetric", (x, y)))
                break
    elif kind == "equivalence":
        for x, y in itertools.product(range(n), repeat=2):
            if rows[x] >> y & 1 and not rows[y] >> x & 1:
                out.append(Violation(f"{key} symmetric", (x, y)))
                break


def _check_o1(r: Rows, q: Rows, out: list[Violation]) -> None:
    for x, (a, b) in enumerate(zip(r, q)):
        extra = a & ~b
        if extra:
            out.append(Violation("O1 (R within Q)", (x, next(members(extra)))))
            return


def _check_o2(r: Rows, q: Rows, out: list[Violation]) -> None:
    eq = intersect(q, converse(q))
    for x in range(len(r)):
        reach = image(eq, r[x])
        missing = q[x] & ~reach
        if missing:
            out.append(Violation("O2", (x, next(members(missing)))))
            return


def _check_e(r: Rows, e: Rows, out: list[Violation]) -> None:
    for x in range(len(r)):
        reach = image(e, r[x])
        for y in members(e[x]):
            missing = r[y] & ~reach
            if missing:
                out.append(Violation("E (commutativity)", (x, y, next(members(missing)))))
                return


def validate(frame: Frame, cls: Logic | None = None) -> Report:
    """Check the defining conditions of ``cls`` (default: the frame's tag)."""
    cls = cls or frame.cls
    missing = [k for k in REQUIRED[cls] if k not in frame.rels]
    if missing:
        raise FrameError(f"{cls.value} validation needs relation(s) {', '.join(missing)}")
    out: list[Violation] = []
    if cls is Logic.S4T:
        _order_checks(frame["Q"], "Q", "quasi", out)
    elif cls in (Logic.MIPC, Logic.TS4):
        r, q = frame["R"], frame["Q"]
        _order_checks(r, "R", "partial" if cls is Logic.MIPC else "quasi", out)
        _order_checks(q, "Q", "quasi", out)
        _check_o1(r, q, out)
        _check_o2(r, q, out)
    else:
        r, e = frame["R"], frame["E"]
        _order_checks(r, "R", "quasi", out)
        _order_checks(e, "E", "equivalence", out)
        _check_e(r, e, out)
    return Report(out)


def require_valid(frame: Frame, cls: Logic) -> None:
    report = validate(frame, cls)
    if not report.ok:
        raise FrameError(f"not a valid {cls.value} frame: {report}")


# -- constructions ---------------------------------------------------------------

@dataclass(frozen=True)
class SkeletonResult:
    frame: Frame
    proj: tuple[int, ...]


def clusters(r: Rows) -> tuple[int, ...]:
    """World -> index of its mutual-R cluster, clusters numbered by least member."""
    proj: list[int] = [-1] * len(r)
    count = 0
    for x in range(len(r)):
        if proj[x] >= 0:
            continue
        for y in range(x, len(r)):
            if r[x] >> y & 1 and r[y] >> x & 1:
                proj[y] = count
        count += 1
    return tuple(proj)


def _quotient(r: Rows, q: Rows, proj: tuple[int, ...]) -> tuple[Rows, Rows]:
    m = max(proj) + 1
    r2, q2 = [0] * m, [0] * m
    for x in range(len(r)):
        for y in members(r[x]):
            r2[proj[x]] |= 1 << proj[y]
        for y in members(q[x]):
            q2[proj[x]] |= 1 << proj[y]
    return tuple(r2), tuple(q2)


def skeleton_ms4(frame: Frame) -> SkeletonResult:
    """Collapse R-clusters of an MS4 (or MS4T) frame into an MIPC frame."""
    if frame.cls not in (Logic.MS4, Logic.MS4T):
        raise FrameError(f"expected an MS4 frame, got {frame.cls.value}")
    require_valid(frame, frame.cls)
    proj = clusters(frame["R"])
    r2, q2 = _quotient(frame["R"], q_e(frame), proj)
    return SkeletonResult(Frame(len(r2), {"R": r2, "Q": q2}, Logic.MIPC), proj)


def skeleton_ts4(frame: Frame) -> SkeletonResult:
    if frame.cls not in (Logic.TS4, Logic.MIPC):
        raise FrameError(f"expected a TS4 frame, got {frame.cls.value}")
    require_valid(frame, Logic.TS4)
    proj = clusters(frame["R"])
    r2, q2 = _quotient(frame["R"], frame["Q"], proj)
    return SkeletonResult(Frame(len(r2), {"R": r2, "Q": q2}, Logic.MIPC), proj)


def dagger_frame(frame: Frame) -> Frame:
    """MS4T frame ``(X, R, E)`` -> TS4 frame ``(X, R, Q_E)``."""
    require_valid(frame, Logic.MS4T)
    return Frame(frame.n, {"R": frame["R"], "Q": q_e(frame)}, Logic.TS4)


def ms4_of_mipc(frame: Frame) -> Frame:
    """MIPC frame ``(X, R, Q)`` -> MS4 frame ``(X, R, E_Q)``."""
    require_valid(frame, Logic.MIPC)
    return Frame(frame.n, {"R": frame["R"], "E": e_q(frame)}, Logic.MS4)


def ms4t_of_ts4(frame: Frame) -> Frame:
    """TS4 frame ``(X, R, Q)`` -> MS4T frame ``(X, R, E_Q)``; inverse of :func:`dagger_frame`."""
    require_valid(frame, Logic.TS4)
    return Frame(frame.n, {"R": frame["R"], "E": e_q(frame)}, Logic.MS4T)


# -- isomorphism -------------------------------------------------------------------

def _permute(rows: Rows, perm: Sequence[int]) -> Rows:
    """Relabel world ``x`` as ``perm[x]``."""
    out = [0] * len(rows)
    for x, row in enumerate(rows):
        acc = 0
        for y in members(row):
            acc |= 1 << perm[y]
        out[perm[x]] = acc
    return tuple(out)


def find_isomorphism(a: Frame, b: Frame) -> tuple[int, ...] | None:
    """A bijection ``perm`` with ``perm`` carrying ``a`` onto ``b``, by brute force."""
    if a.n != b.n or set(a.rels) != set(b.rels):
        return None
    for perm in itertools.permutations(range(a.n)):
        if all(_permute(a.rels[k], perm) == b.rels[k] for k in a.rels):
            return perm
    return None


def isomorphic(a: Frame, b: Frame) -> bool:
    return find_isomorphism(a, b) is not None


def canonical_form(frame: Frame) -> tuple:
    """Lexicographically least relation encoding over all relabellings."""
    keys = sorted(frame.rels)
    return min(
        tuple(_permute(frame.rels[k], perm) for k in keys)
        for perm in itertools.permutations(range(frame.n))
    )


def dedup(frames: Iterable[Frame]) -> list[Frame]:
    """Keep the first frame of each isomorphism class."""
    seen: set = set()
    out = []
    for f in frames:
        key = (f.cls, canonical_form(f))
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


# -- enumeration -------------------------------------------------------------------

def _off_diagonal(n: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(n) for y in range(n) if x != y]


def _rows_from_code(n: int, pairs: list[tuple[int, int]], code: int) -> Rows:
    rows = list(identity(n))
    k = len(pairs)
    for i, (x, y) in enumerate(pairs):
        if code >> (k - 1 - i) & 1:
            rows[x] |= 1 << y
    return tuple(rows)


def _quasi_orders_filtered(n: int) -> list[Rows]:
    pairs = _off_diagonal(n)
    out = []
    for code in range(1 << len(pairs)):
        rows = _rows_from_code(n, pairs, code)
        if is_transitive(rows):
            out.append(rows)
    return out


def _quasi_orders_incremental(n: int) -> list[Rows]:
    """Same order as the filtered version: pairs decided most-significant first, 0 before 1."""
    pairs = _off_diagonal(n)
    value: dict[tuple[int, int], int] = {(x, x): 1 for x in range(n)}
    out: list[Rows] = []

    def consistent(x: int, y: int) -> bool:
        # every fully decided triple touching (x, y) must be transitive
        for z in range(n):
            for a, b, c in ((x, y, z), (z, x, y), (x, z, y)):
                ab, bc, ac = value.get((a, b)), value.get((b, c)), value.get((a, c))
                if ab == 1 and bc == 1 and ac == 0:
                    return False
        return True

    def extend(i: int) -> None:
        if i == len(pairs):
            rows = [0] * n
            for (a, b), v in value.items():
                if v:
                    rows[a] |= 1 << b
            out.append(tuple(rows))
            return
        x, y = pairs[i]
        for bit in (0, 1):
            value[(x, y)] = bit
            if consistent(x, y):
                extend(i + 1)
        del value[(x, y)]

    extend(0)
    return out


@lru_cache(maxsize=None)
def quasi_orders(n: int) -> tuple[Rows, ...]:
    if n <= 3:
        return tuple(_quasi_orders_filtered(n))
    return tuple(_quasi_orders_incremental(n))


@lru_cache(maxsize=None)
def partial_orders(n: int) -> tuple[Rows, ...]:
    return tuple(r for r in quasi_orders(n) if is_antisymmetric(r))


@lru_cache(maxsize=None)
def equivalences(n: int) -> tuple[Rows, ...]:
    return tuple(r for r in quasi_orders(n) if is_symmetric(r))


def _o2_holds(r: Rows, q: Rows) -> bool:
    eq = intersect(q, converse(q))
    return all(q[x] & ~image(eq, r[x]) == 0 for x in range(len(r)))


def _e_holds(r: Rows, e: Rows) -> bool:
    for x in range(len(r)):
        reach = image(e, r[x])
        if any(r[y] & ~reach for y in members(e[x])):
            return False
    return True


@lru_cache(maxsize=None)
def _frames(n: int, cls: Logic) -> tuple[Frame, ...]:
    out: list[Frame] = []
    if cls is Logic.S4T:
        out = [Frame(n, {"Q": q}, cls) for q in quasi_orders(n)]
    elif cls in (Logic.MIPC, Logic.TS4):
        rs = partial_orders(n) if cls is Logic.MIPC else quasi_orders(n)
        for r in rs:
            for q in quasi_orders(n):
                if is_subrelation(r, q) and _o2_holds(r, q):
                    out.append(Frame(n, {"R": r, "Q": q}, cls))
    else:
        for r in quasi_orders(n):
            for e in equivalences(n):
                if _e_holds(r, e):
                    out.append(Frame(n, {"R": r, "E": e}, cls))
    return tuple(out)


def enumerate_frames(n: int, cls: Logic) -> Iterator[Frame]:
    """Every labelled frame of ``cls`` on worlds ``0..n-1``, once each, in a fixed order."""
    check_bound(n)
    yield from _frames(n, cls)


def frames_up_to(n: int, cls: Logic) -> list[Frame]:
    check_bound(n)
    return [f for k in range(1, n + 1) for f in _frames(k, cls)]


# -- frame files -------------------------------------------------------------------

def parse_frame_file(text: str) -> tuple[Frame, dict[str, int]]:
    """Read the line-based frame format; returns the frame and its valuation block."""
    name, cls, n = "", None, None
    edges: dict[str, list[tuple[int, int]]] = {}
    valuation: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("SUMMARY:"):
            continue
        head, *args = line.split()
        try:
            if head == "frame":
                name = " ".join(args)
            elif head == "class":
                (label,) = args
                cls = Logic.parse(label)
            elif head == "worlds":
                (count,) = args
                n = int(count)
            elif head == "rel":
                key, a, b = args
                edges.setdefault(key, []).append((int(a), int(b)))
            elif head == "val":
                letter, *worlds = args
                mask = valuation.get(letter, 0)
                for w in worlds:
                    mask |= 1 << int(w)
                valuation[letter] = mask
            else:
                raise FrameError(f"unknown directive {head!r}")
        except (ValueError, TypeError) as exc:
            raise FrameError(f"line {lineno}: {exc}") from None
    if cls is None or n is None:
        raise FrameError("frame file needs 'class' and 'worlds' lines")
    for key in REQUIRED[cls]:
        edges.setdefault(key, [])
    frame = Frame(n, {k: from_pairs(n, v) for k, v in edges.items()}, cls, name)
    for letter, mask in valuation.items():
        if mask >> n:
            raise FrameError(f"valuation of {letter} mentions a world outside 0..{n - 1}")
    return frame, valuation


def format_frame(frame: Frame, valuation: Mapping[str, int] | None = None,
                 name: str | None = None) -> str:
    lines = [
        f"frame {name or frame.name or 'unnamed'}",
        f"class {frame.cls.value}",
        f"worlds {frame.n}",
    ]
    for key, rows in frame.rels.items():
        lines.extend(f"rel {key} {a} {b}" for a, b in to_pairs(rows))
    for letter in sorted(valuation or {}):
        worlds = " ".join(str(w) for w in members(valuation[letter]))
        lines.append(f"val {letter} {worlds}".rstrip())
    return "\n".join(lines) + "\n"
