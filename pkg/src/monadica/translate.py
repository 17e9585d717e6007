"""Translations between the five languages.

Every translation is a structural recursion; none simplifies its output.
Diamond-type nodes get their own clauses (the De Morgan duals of the box
clauses) instead of being rewritten through double negation first.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

from .syntax import (
    And, Bottom, Box, BoxF, BoxP, Dia, DiaF, DiaP, Exists, Forall,
    Formula, Implies, Letter, Logic, Not, Or, Unary, require,
)

Translation = Callable[[Formula], Formula]


def _boolean(f: Formula, rec: Translation) -> Formula | None:
    """Homomorphic clauses shared by every translation, or None."""
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Not):
        return Not(rec(f.child))
    if isinstance(f, (And, Or)):
        return type(f)(rec(f.left), rec(f.right))
    return None


@lru_cache(maxsize=4096)
def _t(f: Formula) -> Formula:
    if isinstance(f, Letter):
        return Box(f)
    if isinstance(f, Implies):
        return Box(Or(Not(_t(f.left)), _t(f.right)))
    if isinstance(f, Forall):
        return Box(Forall(_t(f.child)))
    if isinstance(f, Exists):
        return Exists(_t(f.child))
    return _boolean(f, _t)


@lru_cache(maxsize=4096)
def _natural(f: Formula) -> Formula:
    if isinstance(f, Letter):
        return Box(f)
    if isinstance(f, Implies):
        return Box(Or(Not(_natural(f.left)), _natural(f.right)))
    if isinstance(f, Forall):
        return BoxF(_natural(f.child))
    if isinstance(f, Exists):
        return DiaP(_natural(f.child))
    return _boolean(f, _natural)


@lru_cache(maxsize=4096)
def _sharp(f: Formula) -> Formula:
    if isinstance(f, Letter):
        return f
    if isinstance(f, Implies):
        return Implies(_sharp(f.left), _sharp(f.right))
    if isinstance(f, Box):
        return BoxF(_sharp(f.child))
    if isinstance(f, Dia):
        return DiaF(_sharp(f.child))
    if isinstance(f, (Forall, Exists)):
        return type(f)(_sharp(f.child))
    return _boolean(f, _sharp)


@lru_cache(maxsize=4096)
def _dagger(f: Formula) -> Formula:
    if isinstance(f, Letter):
        return f
    if isinstance(f, Implies):
        return Implies(_dagger(f.left), _dagger(f.right))
    if isinstance(f, Unary) and not isinstance(f, Not):
        c = _dagger(f.child)
        if isinstance(f, Box):
            return BoxF(c)
        if isinstance(f, Dia):
            return DiaF(c)
        if isinstance(f, BoxF):
            return BoxF(Forall(c))
        if isinstance(f, DiaF):
            return DiaF(Exists(c))
        if isinstance(f, BoxP):
            return Forall(BoxP(c))
        if isinstance(f, DiaP):
            return Exists(DiaP(c))
    return _boolean(f, _dagger)


@lru_cache(maxsize=4096)
def _flat(f: Formula) -> Formula:
    if isinstance(f, Letter):
        return BoxF(f)
    if isinstance(f, Implies):
        return BoxF(Or(Not(_flat(f.left)), _flat(f.right)))
    if isinstance(f, Forall):
        return BoxF(Forall(_flat(f.child)))
    if isinstance(f, Exists):
        return DiaP(Exists(_flat(f.child)))
    return _boolean(f, _flat)


def godel_t(f: Formula) -> Formula:
    """Goedel translation MIPC -> MS4."""
    require(f, Logic.MIPC)
    return _t(f)


def natural(f: Formula) -> Formula:
    """MIPC -> TS4: the quantifiers become always-in-future / sometime-in-past."""
    require(f, Logic.MIPC)
    return _natural(f)


def sharp(f: Formula) -> Formula:
    """MS4 -> MS4T: the S4 box becomes the future box."""
    require(f, Logic.MS4)
    return _sharp(f)


def dagger(f: Formula) -> Formula:
    """TS4 -> MS4T."""
    require(f, Logic.TS4)
    return _dagger(f)


def flat(f: Formula) -> Formula:
    """MIPC -> MS4T directly; differs from :func:`t_sharp` only on ``E``."""
    require(f, Logic.MIPC)
    return _flat(f)


def t_sharp(f: Formula) -> Formula:
    return sharp(godel_t(f))


def natural_dagger(f: Formula) -> Formula:
    return dagger(natural(f))


# name -> (source, target, function)
TRANSLATIONS: dict[str, tuple[Logic, Logic, Translation]] = {
    "t": (Logic.MIPC, Logic.MS4, godel_t),
    "natural": (Logic.MIPC, Logic.TS4, natural),
    "sharp": (Logic.MS4, Logic.MS4T, sharp),
    "dagger": (Logic.TS4, Logic.MS4T, dagger),
    "flat": (Logic.MIPC, Logic.MS4T, flat),
    "t_sharp": (Logic.MIPC, Logic.MS4T, t_sharp),
    "natural_dagger": (Logic.MIPC, Logic.MS4T, natural_dagger),
}


__all__ = [
    "godel_t", "natural", "sharp", "dagger", "flat", "t_sharp",
    "natural_dagger", "TRANSLATIONS",
]
