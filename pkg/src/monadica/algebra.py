"""Finite algebras as explicit operation tables.

Elements are ``0..m-1``.  Heyting kinds (MHA) carry an implication table,
boolean kinds carry a complement table; diamonds and the boolean ``exists``
are derived as ``neg . box . neg`` on demand.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import frames as fr
from .frames import Frame, Report, Violation
from .syntax import (
    And, Bottom, Box, BoxF, BoxP, Dia, DiaF, DiaP, Exists, Forall, Formula,
    Implies, Letter, Logic, Not, Or, letters, require, subformulas,
)

Table = tuple[int, ...]


class AlgebraClass(enum.Enum):
    MHA = "MHA"
    MS4A = "MS4A"
    S4TA = "S4TA"
    TS4A = "TS4A"
    MS4TA = "MS4TA"

    @property
    def logic(self) -> Logic:
        return _LOGIC_OF[self]

    @property
    def boolean(self) -> bool:
        return self is not AlgebraClass.MHA

    @classmethod
    def of(cls, logic: Logic) -> "AlgebraClass":
        return _ALGEBRA_OF[logic]

    @classmethod
    def parse(cls, name: str) -> "AlgebraClass":
        key = name.upper().replace(".", "")
        if key in cls.__members__:
            return cls[key]
        return cls.of(Logic.parse(name))


_ALGEBRA_OF = {
    Logic.MIPC: AlgebraClass.MHA,
    Logic.MS4: AlgebraClass.MS4A,
    Logic.S4T: AlgebraClass.S4TA,
    Logic.TS4: AlgebraClass.TS4A,
    Logic.MS4T: AlgebraClass.MS4TA,
}
_LOGIC_OF = {v: k for k, v in _ALGEBRA_OF.items()}

REQUIRED_OPS: dict[AlgebraClass, tuple[str, ...]] = {
    AlgebraClass.MHA: ("forall", "exists"),
    AlgebraClass.MS4A: ("box", "forall"),
    AlgebraClass.S4TA: ("boxF", "boxP"),
    AlgebraClass.TS4A: ("box", "boxF", "boxP"),
    AlgebraClass.MS4TA: ("boxF", "boxP", "forall"),
}

_DUAL = {"dia": "box", "diaF": "boxF", "diaP": "boxP", "exists": "forall"}

_NODE_OP = {
    Box: "box", Dia: "dia", BoxF: "boxF", DiaF: "diaF", BoxP: "boxP",
    DiaP: "diaP", Forall: "forall", Exists: "exists",
}


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    kind: AlgebraClass
    meet: tuple[Table, ...]
    join: tuple[Table, ...]
    ops: Mapping[str, Table]
    bottom: int
    top: int
    impl: tuple[Table, ...] | None = None
    neg: Table | None = None
    # what each element stands for: world bitmasks for complex algebras,
    # ambient element indices for shrunk subalgebras
    labels: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        m = len(self.meet)
        square = lambda t: len(t) == m and all(len(row) == m for row in t)  # noqa: E731
        inside = lambda row: all(0 <= v < m for v in row)  # noqa: E731
        if not (square(self.meet) and square(self.join)):
            raise AlgebraError("meet/join tables must be m x m")
        if not all(inside(r) for r in (*self.meet, *self.join)):
            raise AlgebraError("table entry outside the carrier")
        if self.kind.boolean:
            if self.neg is None or len(self.neg) != m or not inside(self.neg):
                raise AlgebraError(f"{self.kind.value} needs a complement table of length {m}")
        elif self.impl is None or not square(self.impl) or not all(inside(r) for r in self.impl):
            raise AlgebraError("MHA needs an m x m implication table")
        for name in REQUIRED_OPS[self.kind]:
            table = self.ops.get(name)
            if table is None or len(table) != m or not inside(table):
                raise AlgebraError(f"{self.kind.value} needs a unary table {name!r} of length {m}")
        if not (0 <= self.bottom < m and 0 <= self.top < m):
            raise AlgebraError("constants outside the carrier")

    @property
    def size(self) -> int:
        return len(self.meet)

    @property
    def elements(self) -> range:
        return range(self.size)

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def implies(self, a: int, b: int) -> int:
        if self.impl is not None:
            return self.impl[a][b]
        return self.join[self.neg[a]][b]

    def negate(self, a: int) -> int:
        if self.neg is not None:
            return self.neg[a]
        return self.impl[a][self.bottom]

    def unary(self, name: str) -> Table:
        """Table of a modal operator, deriving diamonds by duality."""
        if name in self.ops:
            return self.ops[name]
        if name in self._cache:
            return self._cache[name]
        if name not in _DUAL or self.neg is None or _DUAL[name] not in self.ops:
            raise AlgebraError(f"{self.kind.value} algebra has no operator {name!r}")
        box, neg = self.ops[_DUAL[name]], self.neg
        table = tuple(neg[box[neg[a]]] for a in self.elements)
        self._cache[name] = table
        return table

    def join_all(self, items: Iterable[int]) -> int:
        acc = self.bottom
        for b in items:
            acc = self.join[acc][b]
        return acc

    def meet_all(self, items: Iterable[int]) -> int:
        acc = self.top
        for b in items:
            acc = self.meet[acc][b]
        return acc


# -- complex algebras -----------------------------------------------------------------

def _box_of(rows: fr.Rows, n: int):
    """``U -> X \\ rows^-1[X \\ U]``: worlds all of whose successors lie in U."""
    full = fr.full_set(n)
    return lambda u: full & ~fr.preimage(rows, full & ~u)


def complex_algebra(frame: Frame, cls: Logic | None = None) -> FiniteAlgebra:
    """Algebra of R-upsets (MIPC) or of all subsets (other classes) of ``frame``."""
    cls = cls or frame.cls
    fr.require_valid(frame, cls)
    n, full = frame.n, fr.full_set(frame.n)
    if cls is Logic.MIPC:
        carrier = frame.r_upsets
    else:
        carrier = tuple(range(1 << n))
    index = {u: i for i, u in enumerate(carrier)}

    def table(fn) -> Table:
        return tuple(index[fn(u)] for u in carrier)

    meet = tuple(tuple(index[u & v] for v in carrier) for u in carrier)
    join = tuple(tuple(index[u | v] for v in carrier) for u in carrier)
    kw: dict = {}
    ops: dict[str, Table] = {}
    if cls is Logic.MIPC:
        r, q = frame["R"], frame["Q"]
        kw["impl"] = tuple(
            tuple(index[full & ~fr.preimage(r, u & ~v)] for v in carrier) for u in carrier
        )
        ops["forall"] = table(_box_of(q, n))
        ops["exists"] = table(lambda u: fr.image(frame.eq_rows, u))
    else:
        kw["neg"] = table(lambda u: full & ~u)
        if cls in (Logic.MS4, Logic.TS4):
            ops["box"] = table(_box_of(frame["R"], n))
        if cls in (Logic.MS4, Logic.MS4T):
            ops["forall"] = table(_box_of(frame["E"], n))
        if cls in (Logic.S4T, Logic.TS4):
            ops["boxF"] = table(_box_of(frame["Q"], n))
            ops["boxP"] = table(_box_of(frame.conv["Q"], n))
        if cls is Logic.MS4T:
            ops["boxF"] = table(_box_of(frame["R"], n))
            ops["boxP"] = table(_box_of(frame.conv["R"], n))
    return FiniteAlgebra(
        AlgebraClass.of(cls), meet, join, ops, index[0], index[full], labels=carrier, **kw
    )


def two_element(kind: AlgebraClass) -> FiniteAlgebra:
    """The two-element algebra with every modal operator the identity."""
    meet = ((0, 0), (0, 1))
    join = ((0, 1), (1, 1))
    ops = {name: (0, 1) for name in REQUIRED_OPS[kind]}
    if kind.boolean:
        return FiniteAlgebra(kind, meet, join, ops, 0, 1, neg=(1, 0))
    return FiniteAlgebra(kind, meet, join, ops, 0, 1, impl=((1, 1), (0, 1)))


def powerset_algebra(kind: AlgebraClass, atoms: int, **ops: Sequence[int]) -> FiniteAlgebra:
    """Boolean algebra of subsets of ``atoms`` points with the given unary tables."""
    m = 1 << atoms
    full = m - 1
    meet = tuple(tuple(a & b for b in range(m)) for a in range(m))
    join = tuple(tuple(a | b for b in range(m)) for a in range(m))
    neg = tuple(full & ~a for a in range(m))
    return FiniteAlgebra(kind, meet, join, {k: tuple(v) for k, v in ops.items()}, 0, full,
                         neg=neg, labels=tuple(range(m)))


# -- axioms -------------------------------------------------------------------------------

def _first(out: list[Violation], name: str, cases: Iterable[tuple[int, ...]], pred) -> None:
    for case in cases:
        if not pred(*case):
            out.append(Violation(name, case))
            return


def _lattice_checks(alg: FiniteAlgebra, out: list[Violation]) -> None:
    E = alg.elements
    m, j = alg.meet, alg.join
    pairs = list(itertools.product(E, repeat=2))
    triples = list(itertools.product(E, repeat=3))
    _first(out, "meet commutative", pairs, lambda a, b: m[a][b] == m[b][a])
    _first(out, "join commutative", pairs, lambda a, b: j[a][b] == j[b][a])
    _first(out, "meet associative", triples, lambda a, b, c: m[m[a][b]][c] == m[a][m[b][c]])
    _first(out, "join associative", triples, lambda a, b, c: j[j[a][b]][c] == j[a][j[b][c]])
    _first(out, "absorption", pairs, lambda a, b: m[a][j[a][b]] == a and j[a][m[a][b]] == a)
    _first(out, "bounds", ((a,) for a in E),
           lambda a: m[a][alg.bottom] == alg.bottom and j[a][alg.top] == alg.top)
    _first(out, "distributive", triples, lambda a, b, c: m[a][j[b][c]] == j[m[a][b]][m[a][c]])
    if alg.kind.boolean:
        neg = alg.neg
        _first(out, "complement", ((a,) for a in E),
               lambda a: m[a][neg[a]] == alg.bottom and j[a][neg[a]] == alg.top)
    else:
        _first(out, "residuation (c&a <= b iff c <= a->b)", triples,
               lambda a, b, c: alg.leq(m[c][a], b) == alg.leq(c, alg.impl[a][b]))


def _interior(alg: FiniteAlgebra, name: str, out: list[Violation]) -> None:
    i, m, E = alg.unary(name), alg.meet, alg.elements
    _first(out, f"{name}(a & b) = {name}(a) & {name}(b)", itertools.product(E, repeat=2),
           lambda a, b: i[m[a][b]] == m[i[a]][i[b]])
    _first(out, f"{name}(1) = 1", [(alg.top,)], lambda a: i[a] == alg.top)
    _first(out, f"{name}(a) <= a", ((a,) for a in E), lambda a: alg.leq(i[a], a))
    _first(out, f"{name}(a) <= {name}({name}(a))", ((a,) for a in E), lambda a: alg.leq(i[a], i[i[a]]))


def _closure(alg: FiniteAlgebra, name: str, out: list[Violation]) -> None:
    c, j, E = alg.unary(name), alg.join, alg.elements
    _first(out, f"{name}(a | b) = {name}(a) | {name}(b)", itertools.product(E, repeat=2),
           lambda a, b: c[j[a][b]] == j[c[a]][c[b]])
    _first(out, f"{name}(0) = 0", [(alg.bottom,)], lambda a: c[a] == alg.bottom)
    _first(out, f"a <= {name}(a)", ((a,) for a in E), lambda a: alg.leq(a, c[a]))
    _first(out, f"{name}({name}(a)) <= {name}(a)", ((a,) for a in E), lambda a: alg.leq(c[c[a]], c[a]))


def _s5(alg: FiniteAlgebra, out: list[Violation]) -> None:
    _interior(alg, "forall", out)
    fa, ex = alg.unary("forall"), alg.unary("exists")
    _first(out, "a <= forall exists a", ((a,) for a in alg.elements),
           lambda a: alg.leq(a, fa[ex[a]]))


def _tense(alg: FiniteAlgebra, out: list[Violation]) -> None:
    _interior(alg, "boxF", out)
    _interior(alg, "boxP", out)
    bf, bp, df, dp = (alg.unary(k) for k in ("boxF", "boxP", "diaF", "diaP"))
    E = [(a,) for a in alg.elements]
    _first(out, "PF: a <= boxP diaF a", E, lambda a: alg.leq(a, bp[df[a]]))
    _first(out, "FP: a <= boxF diaP a", E, lambda a: alg.leq(a, bf[dp[a]]))


def _left_commutativity(alg: FiniteAlgebra, box: str, out: list[Violation]) -> None:
    b, fa = alg.unary(box), alg.unary("forall")
    _first(out, f"{box} forall a <= forall {box} a", ((a,) for a in alg.elements),
           lambda a: alg.leq(b[fa[a]], fa[b[a]]))


def check_axioms(alg: FiniteAlgebra, kind: AlgebraClass | None = None) -> Report:
    """Exhaustively check every defining law of ``kind``; first failure per law."""
    kind = kind or alg.kind
    if kind.boolean != alg.kind.boolean:
        raise AlgebraError(f"cannot check a {alg.kind.value} table set as {kind.value}")
    for name in REQUIRED_OPS[kind]:
        if name not in alg.ops:
            raise AlgebraError(f"{kind.value} needs operator {name!r}")
    out: list[Violation] = []
    _lattice_checks(alg, out)
    E = [(a,) for a in alg.elements]
    if kind is AlgebraClass.MHA:
        fa, ex, m = alg.unary("forall"), alg.unary("exists"), alg.meet
        _interior(alg, "forall", out)
        _closure(alg, "exists", out)
        _first(out, "exists(exists a & b) = exists a & exists b", itertools.product(alg.elements, repeat=2),
               lambda a, b: ex[m[ex[a]][b]] == m[ex[a]][ex[b]])
        _first(out, "forall exists a = exists a", E, lambda a: fa[ex[a]] == ex[a])
        _first(out, "exists forall a = forall a", E, lambda a: ex[fa[a]] == fa[a])
    elif kind is AlgebraClass.MS4A:
        _interior(alg, "box", out)
        _s5(alg, out)
        _left_commutativity(alg, "box", out)
    elif kind is AlgebraClass.S4TA:
        _tense(alg, out)
    elif kind is AlgebraClass.TS4A:
        _interior(alg, "box", out)
        _tense(alg, out)
        dia, df, dp, m = alg.unary("dia"), alg.unary("diaF"), alg.unary("diaP"), alg.meet
        _first(out, "T1: dia a <= diaF a", E, lambda a: alg.leq(dia[a], df[a]))
        _first(out, "T2: diaF a <= dia(diaF a & diaP a)", E,
               lambda a: alg.leq(df[a], dia[m[df[a]][dp[a]]]))
    else:
        _tense(alg, out)
        _s5(alg, out)
        _left_commutativity(alg, "boxF", out)
    return Report(out)


def _require_axioms(alg: FiniteAlgebra) -> None:
    report = check_axioms(alg)
    if not report.ok:
        raise AlgebraError(f"not a {alg.kind.value}: {report}")


def equivalent_ms4_axioms(alg: FiniteAlgebra) -> Report:
    """The five alternative forms of left commutativity (box = boxF for MS4TA)."""
    if alg.kind not in (AlgebraClass.MS4A, AlgebraClass.MS4TA):
        raise AlgebraError("needs an MS4 or MS4.t algebra")
    box = "box" if alg.kind is AlgebraClass.MS4A else "boxF"
    b, fa, ex = alg.unary(box), alg.unary("forall"), alg.unary("exists")
    E = [(a,) for a in alg.elements]
    out: list[Violation] = []
    _first(out, "(1) box forall box a = box forall a", E, lambda a: b[fa[b[a]]] == b[fa[a]])
    _first(out, "(2) forall box forall a = box forall a", E, lambda a: fa[b[fa[a]]] == b[fa[a]])
    _first(out, "(3) exists box exists a = box exists a", E, lambda a: ex[b[ex[a]]] == b[ex[a]])
    _first(out, "(4) box exists box a = exists box a", E, lambda a: b[ex[b[a]]] == ex[b[a]])
    _first(out, "(5) exists box a <= box exists a", E, lambda a: alg.leq(ex[b[a]], b[ex[a]]))
    return Report(out)


def fixpoints(alg: FiniteAlgebra, opname: str) -> list[int]:
    op = alg.unary(opname)
    return [a for a in alg.elements if op[a] == a]


def adjoint_check(alg: FiniteAlgebra) -> Report:
    """forall a is the largest, exists a the least, forall-fixpoint around a."""
    if alg.kind not in (AlgebraClass.MHA, AlgebraClass.MS4A, AlgebraClass.MS4TA):
        raise AlgebraError(f"{alg.kind.value} has no forall/exists pair")
    h0 = fixpoints(alg, "forall")
    fa, ex = alg.unary("forall"), alg.unary("exists")
    out: list[Violation] = []
    for a in alg.elements:
        below = [b for b in h0 if alg.leq(b, a)]
        top = [b for b in below if all(alg.leq(c, b) for c in below)]
        if top != [fa[a]]:
            out.append(Violation("forall a = max{b in H0 : b <= a}", (a,)))
            break
    for a in alg.elements:
        above = [b for b in h0 if alg.leq(a, b)]
        least = [b for b in above if all(alg.leq(b, c) for c in above)]
        if least != [ex[a]]:
            out.append(Violation("exists a = min{b in H0 : a <= b}", (a,)))
            break
    return Report(out)


def dual_iso_check(alg: FiniteAlgebra) -> Report:
    """Complement is an order-reversing bijection from boxF- onto boxP-fixpoints."""
    if alg.kind not in (AlgebraClass.S4TA, AlgebraClass.TS4A, AlgebraClass.MS4TA):
        raise AlgebraError(f"{alg.kind.value} has no tense pair")
    hf, hp = fixpoints(alg, "boxF"), fixpoints(alg, "boxP")
    neg = alg.neg
    out: list[Violation] = []
    for a in hf:
        if neg[a] not in hp:
            out.append(Violation("neg maps H_F into H_P", (a,)))
            break
    for a in hp:
        if neg[a] not in hf:
            out.append(Violation("neg maps H_P into H_F", (a,)))
            break
    if len({neg[a] for a in hf}) != len(hf) or len(hf) != len(hp):
        out.append(Violation("neg is a bijection H_F -> H_P", ()))
    _first(out, "neg reverses order on H_F", itertools.product(hf, repeat=2),
           lambda a, b: alg.leq(a, b) == alg.leq(neg[b], neg[a]))
    return Report(out)


# -- terms -------------------------------------------------------------------------------

def eval_terms(alg: FiniteAlgebra, formula: Formula,
               assignment: Mapping[str, int]) -> dict[Formula, int]:
    """Value of every subterm of ``formula``."""
    require(formula, alg.kind.logic)
    missing = letters(formula) - set(assignment)
    if missing:
        raise AlgebraError(f"assignment misses letter(s) {', '.join(sorted(missing))}")
    val: dict[Formula, int] = {}
    for node in subformulas(formula):
        if isinstance(node, Bottom):
            v = alg.bottom
        elif isinstance(node, Letter):
            v = assignment[node.name]
            if not 0 <= v < alg.size:
                raise AlgebraError(f"{node.name} assigned to non-element {v}")
        elif isinstance(node, And):
            v = alg.meet[val[node.left]][val[node.right]]
        elif isinstance(node, Or):
            v = alg.join[val[node.left]][val[node.right]]
        elif isinstance(node, Implies):
            v = alg.implies(val[node.left], val[node.right])
        elif isinstance(node, Not):
            v = alg.negate(val[node.child])
        else:
            v = alg.unary(_NODE_OP[type(node)])[val[node.child]]
        val[node] = v
    return val


def eval_term(alg: FiniteAlgebra, formula: Formula, assignment: Mapping[str, int]) -> int:
    return eval_terms(alg, formula, assignment)[formula]


# -- canonical frames ---------------------------------------------------------------------

def filters(alg: FiniteAlgebra) -> list[int]:
    """All proper filters, as bitmasks over elements.

    In a finite lattice every filter is principal (it contains the meet of
    its members), so the up-sets of non-bottom elements are all of them.
    """
    out = []
    for a in alg.elements:
        if a == alg.bottom:
            continue
        out.append(sum(1 << b for b in alg.elements if alg.leq(a, b)))
    return out


def is_prime(alg: FiniteAlgebra, filt: int) -> bool:
    if filt >> alg.bottom & 1:
        return False
    for b, c in itertools.product(alg.elements, repeat=2):
        if filt >> alg.join[b][c] & 1 and not (filt >> b & 1 or filt >> c & 1):
            return False
    return True


def prime_filters(alg: FiniteAlgebra) -> list[int]:
    """Prime filters (ultrafilters in the boolean case), ordered by generator."""
    return [f for f in filters(alg) if is_prime(alg, f)]


def _mask(items: Iterable[int]) -> int:
    return sum(1 << a for a in items)


def canonical_frame(alg: FiniteAlgebra) -> Frame:
    """Frame of prime filters with relations read off fixpoint traces."""
    _require_axioms(alg)
    xs = prime_filters(alg)
    n = len(xs)

    def rel(pred) -> fr.Rows:
        return tuple(sum(1 << j for j, y in enumerate(xs) if pred(x, y)) for x in xs)

    def trace_in(h: int):
        return lambda x, y: x & h & ~y == 0

    def same_trace(h: int):
        return lambda x, y: x & h == y & h

    kind = alg.kind
    if kind is AlgebraClass.MHA:
        rels = {"R": rel(lambda x, y: x & ~y == 0),
                "Q": rel(trace_in(_mask(fixpoints(alg, "forall"))))}
    elif kind is AlgebraClass.MS4A:
        rels = {"R": rel(trace_in(_mask(fixpoints(alg, "box")))),
                "E": rel(same_trace(_mask(fixpoints(alg, "forall"))))}
    elif kind is AlgebraClass.S4TA:
        rels = {"Q": rel(trace_in(_mask(fixpoints(alg, "boxF"))))}
    elif kind is AlgebraClass.TS4A:
        rels = {"R": rel(trace_in(_mask(fixpoints(alg, "box")))),
                "Q": rel(trace_in(_mask(fixpoints(alg, "boxF"))))}
    else:
        rels = {"R": rel(trace_in(_mask(fixpoints(alg, "boxF")))),
                "E": rel(same_trace(_mask(fixpoints(alg, "forall"))))}
    return Frame(n, rels, kind.logic)


def stone_map(alg: FiniteAlgebra) -> tuple[int, ...]:
    """Element -> set of prime filters containing it (world bitmask of the canonical frame)."""
    xs = prime_filters(alg)
    return tuple(sum(1 << i for i, x in enumerate(xs) if x >> a & 1) for a in alg.elements)


def is_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra, h: Sequence[int]) -> bool:
    """Does ``h`` carry ``a`` bijectively onto ``b``, respecting every table?"""
    if a.kind != b.kind or a.size != b.size or sorted(h) != list(b.elements):
        return False
    if h[a.bottom] != b.bottom or h[a.top] != b.top:
        return False
    for x, y in itertools.product(a.elements, repeat=2):
        if h[a.meet[x][y]] != b.meet[h[x]][h[y]] or h[a.join[x][y]] != b.join[h[x]][h[y]]:
            return False
        if h[a.implies(x, y)] != b.implies(h[x], h[y]):
            return False
    for name in REQUIRED_OPS[a.kind]:
        ta, tb = a.unary(name), b.unary(name)
        if any(h[ta[x]] != tb[h[x]] for x in a.elements):
            return False
    if a.kind.boolean and any(h[a.neg[x]] != b.neg[h[x]] for x in a.elements):
        return False
    return True


def stone_check(alg: FiniteAlgebra) -> bool:
    """Is the Stone map an isomorphism onto the complex algebra of the canonical frame?"""
    _require_axioms(alg)
    target = complex_algebra(canonical_frame(alg))
    where = {label: i for i, label in enumerate(target.labels)}
    beta = stone_map(alg)
    if any(s not in where for s in beta):
        return False
    return is_isomorphism(alg, target, [where[s] for s in beta])


def _fingerprint(alg: FiniteAlgebra, a: int) -> tuple:
    below = sum(1 for b in alg.elements if alg.leq(b, a))
    fixed = tuple(alg.unary(k)[a] == a for k in REQUIRED_OPS[alg.kind])
    return below, fixed


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> tuple[int, ...] | None:
    """Brute-force bijection search, pruned by element fingerprints."""
    if a.kind != b.kind or a.size != b.size:
        return None
    fa = [_fingerprint(a, x) for x in a.elements]
    fb = [_fingerprint(b, y) for y in b.elements]
    if sorted(fa) != sorted(fb):
        return None
    h: list[int] = [-1] * a.size
    used: set[int] = set()

    def extend(x: int) -> bool:
        if x == a.size:
            return is_isomorphism(a, b, h)
        for y in b.elements:
            if y in used or fb[y] != fa[x]:
                continue
            # partial check of order against already placed elements
            if any(a.leq(z, x) != b.leq(h[z], y) or a.leq(x, z) != b.leq(y, h[z]) for z in range(x)):
                continue
            h[x] = y
            used.add(y)
            if extend(x + 1):
                return True
            used.discard(y)
        h[x] = -1
        return False

    return tuple(h) if extend(0) else None


# -- finite model property construction ---------------------------------------------------

def s5_subalgebra(alg: FiniteAlgebra, seed: Iterable[int]) -> list[int]:
    """Least subset holding ``seed`` and the constants, closed under &, |, neg, forall."""
    if not alg.kind.boolean or "forall" not in alg.ops:
        raise AlgebraError("needs a boolean algebra with forall")
    fa, neg, m, j = alg.ops["forall"], alg.neg, alg.meet, alg.join
    current = set(seed) | {alg.bottom, alg.top}
    while True:
        grown = set(current)
        for a in current:
            grown.add(neg[a])
            grown.add(fa[a])
        for a, b in itertools.combinations(current, 2):
            grown.add(m[a][b])
            grown.add(j[a][b])
        if grown == current:
            return sorted(current)
        current = grown


def shrink(alg: FiniteAlgebra, seed: Iterable[int]) -> FiniteAlgebra:
    """Finite MS4.t subalgebra over the S5-subalgebra generated by ``seed``.

    The tense boxes are replaced by the join of the fixpoints inside the
    subalgebra lying below the argument.  ``labels`` of the result are
    ambient element indices.
    """
    if alg.kind is not AlgebraClass.MS4TA:
        raise AlgebraError("shrink needs an MS4.t algebra")
    _require_axioms(alg)
    carrier = s5_subalgebra(alg, seed)
    pos = {a: i for i, a in enumerate(carrier)}
    hf = [b for b in carrier if alg.ops["boxF"][b] == b]
    hp = [b for b in carrier if alg.ops["boxP"][b] == b]

    def shrunk_box(fixed: list[int]) -> Table:
        return tuple(pos[alg.join_all(b for b in fixed if alg.leq(b, a))] for a in carrier)

    def sub(table: Sequence[int]) -> Table:
        return tuple(pos[table[a]] for a in carrier)

    return FiniteAlgebra(
        AlgebraClass.MS4TA,
        meet=tuple(tuple(pos[alg.meet[a][b]] for b in carrier) for a in carrier),
        join=tuple(tuple(pos[alg.join[a][b]] for b in carrier) for a in carrier),
        ops={"boxF": shrunk_box(hf), "boxP": shrunk_box(hp), "forall": sub(alg.ops["forall"])},
        bottom=pos[alg.bottom],
        top=pos[alg.top],
        neg=sub(alg.neg),
        labels=tuple(carrier),
    )


# -- text dump -----------------------------------------------------------------------------

def dump_algebra(alg: FiniteAlgebra) -> str:
    lines = [f"algebra {alg.kind.value}", f"size {alg.size}",
             f"bottom {alg.bottom}", f"top {alg.top}"]

    def square(name: str, table) -> None:
        lines.append(name)
        lines.extend(" ".join(map(str, row)) for row in table)

    square("meet", alg.meet)
    square("join", alg.join)
    if alg.impl is not None:
        square("impl", alg.impl)
    if alg.neg is not None:
        lines.append("neg " + " ".join(map(str, alg.neg)))
    for name in sorted(alg.ops):
        lines.append(f"op {name} " + " ".join(map(str, alg.ops[name])))
    if alg.labels is not None:
        lines.append("labels " + " ".join(map(str, alg.labels)))
    return "\n".join(lines) + "\n"


def load_algebra(text: str) -> FiniteAlgebra:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("SUMMARY:")]
    fields: dict = {"ops": {}}
    i = 0
    size = None
    try:
        while i < len(lines):
            head, *rest = lines[i].split()
            i += 1
            if head == "algebra":
                fields["kind"] = AlgebraClass.parse(rest[0])
            elif head == "size":
                size = int(rest[0])
            elif head in ("bottom", "top"):
                fields[head] = int(rest[0])
            elif head in ("meet", "join", "impl"):
                if size is None:
                    raise AlgebraError("'size' must precede tables")
                fields[head] = tuple(tuple(map(int, lines[i + k].split())) for k in range(size))
                i += size
            elif head == "neg":
                fields["neg"] = tuple(map(int, rest))
            elif head == "op":
                fields["ops"][rest[0]] = tuple(map(int, rest[1:]))
            elif head == "labels":
                fields["labels"] = tuple(map(int, rest))
            else:
                raise AlgebraError(f"unknown directive {head!r}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, AlgebraError):
            raise
        raise AlgebraError(f"malformed algebra dump near line {i}: {exc}") from None
    for key in ("kind", "meet", "join", "bottom", "top"):
        if key not in fields:
            raise AlgebraError(f"algebra dump lacks {key!r}")
    return FiniteAlgebra(**fields)
