"""Slow, obviously-correct reference implementations used as test oracles.

Relations are Python sets of pairs, truth sets are frozensets of worlds and
validity is checked by plain recursion; nothing here imports the bitmask
machinery under test.
"""

from __future__ import annotations

import itertools

from monadica.syntax import (
    And, Bottom, Box, BoxF, BoxP, Dia, DiaF, DiaP, Exists, Forall, Implies,
    Letter, Logic, Not, Or, letters,
)

NEEDS = {
    Logic.MIPC: ("R", "Q"), Logic.TS4: ("R", "Q"),
    Logic.MS4: ("R", "E"), Logic.MS4T: ("R", "E"), Logic.S4T: ("Q",),
}


def refl(n, rel):
    return all((x, x) in rel for x in range(n))


def trans(n, rel):
    return all((x, z) in rel for (x, y) in rel for (y2, z) in rel if y == y2)


def antisym(rel):
    return all(x == y for (x, y) in rel if (y, x) in rel)


def sym(rel):
    return all((y, x) in rel for (x, y) in rel)


def eq_of(q):
    return {(x, y) for (x, y) in q if (y, x) in q}


def compose(a, b):
    return {(x, z) for (x, y) in a for (y2, z) in b if y == y2}


def valid_frame(n, cls, rels) -> bool:
    if cls is Logic.S4T:
        q = rels["Q"]
        return refl(n, q) and trans(n, q)
    if cls in (Logic.MS4, Logic.MS4T):
        r, e = rels["R"], rels["E"]
        if not (refl(n, r) and trans(n, r) and refl(n, e) and trans(n, e) and sym(e)):
            return False
        # (E): x E y and y R z imply some u with x R u and u E z
        return all(any((x, u) in r and (u, z) in e for u in range(n))
                   for (x, y) in e for (y2, z) in r if y == y2)
    r, q = rels["R"], rels["Q"]
    if not (refl(n, r) and trans(n, r) and refl(n, q) and trans(n, q) and r <= q):
        return False
    if cls is Logic.MIPC and not antisym(r):
        return False
    eq = eq_of(q)
    return all(any((x, z) in r and (z, y) in eq for z in range(n)) for (x, y) in q)


def all_relations(n):
    pairs = [(x, y) for x in range(n) for y in range(n)]
    for bits in range(1 << len(pairs)):
        yield {p for i, p in enumerate(pairs) if bits >> i & 1}


def _unary_ok(n, cls, name, rel):
    """The single-relation conjuncts of :func:`valid_frame`, used to prune early."""
    if not (refl(n, rel) and trans(n, rel)):
        return False
    if name == "E":
        return sym(rel)
    if name == "R" and cls is Logic.MIPC:
        return antisym(rel)
    return True


def all_frames(n, cls):
    """Every relation tuple on n worlds passing the naive checks.

    Logically the filter of all 2^(k n^2) tuples; single-relation conditions
    are applied per coordinate first so n = 3 stays quick.
    """
    names = NEEDS[cls]
    rels = list(all_relations(n))
    pools = [[r for r in rels if _unary_ok(n, cls, name, r)] for name in names]
    for combo in itertools.product(*pools):
        d = dict(zip(names, combo))
        if valid_frame(n, cls, d):
            yield d


def upsets(n, r):
    out = []
    for bits in range(1 << n):
        s = frozenset(x for x in range(n) if bits >> x & 1)
        if all(y in s for (x, y) in r if x in s):
            out.append(s)
    return out


def truth(n, cls, rels, val, f) -> frozenset:
    """Set of worlds where ``f`` holds, by direct recursion on the clauses."""
    W = frozenset(range(n))
    rec = lambda g: truth(n, cls, rels, val, g)  # noqa: E731

    def box(rel, s):
        return frozenset(x for x in W if all(y in s for y in W if (x, y) in rel))

    def dia(rel, s):
        return frozenset(x for x in W if any(y in s for y in W if (x, y) in rel))

    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Letter):
        return frozenset(val[f.name])
    if isinstance(f, And):
        return rec(f.left) & rec(f.right)
    if isinstance(f, Or):
        return rec(f.left) | rec(f.right)
    if isinstance(f, Implies):
        a, b = rec(f.left), rec(f.right)
        if cls is Logic.MIPC:
            return box(rels["R"], (W - a) | b)
        return (W - a) | b
    if isinstance(f, Not):
        a = rec(f.child)
        return box(rels["R"], W - a) if cls is Logic.MIPC else W - a
    s = rec(f.child)
    if isinstance(f, (Forall, Exists)):
        if cls is Logic.MIPC:
            return box(rels["Q"], s) if isinstance(f, Forall) else dia(eq_of(rels["Q"]), s)
        return box(rels["E"], s) if isinstance(f, Forall) else dia(rels["E"], s)
    if isinstance(f, (Box, Dia)):
        return box(rels["R"], s) if isinstance(f, Box) else dia(rels["R"], s)
    fut = rels["R"] if cls is Logic.MS4T else rels["Q"]
    past = {(y, x) for (x, y) in fut}
    if isinstance(f, BoxF):
        return box(fut, s)
    if isinstance(f, DiaF):
        return dia(fut, s)
    if isinstance(f, BoxP):
        return box(past, s)
    if isinstance(f, DiaP):
        return dia(past, s)
    raise TypeError(f)


def valuations(n, cls, rels, names):
    if cls is Logic.MIPC:
        choices = upsets(n, rels["R"])
    else:
        choices = [frozenset(x for x in range(n) if b >> x & 1) for b in range(1 << n)]
    for combo in itertools.product(choices, repeat=len(names)):
        yield dict(zip(names, combo))


def valid_on(n, cls, rels, f) -> bool:
    names = sorted(letters(f))
    return all(truth(n, cls, rels, v, f) == frozenset(range(n))
               for v in valuations(n, cls, rels, names))


def smallest_countermodel_size(cls, f, up_to) -> int | None:
    for n in range(1, up_to + 1):
        if any(not valid_on(n, cls, rels, f) for rels in all_frames(n, cls)):
            return n
    return None
