"""Threshold formulas, bad-event classes and exact local-lemma budgets.

Everything that feeds a verdict is computed with integers or ``Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

PROPER_CLASSES = ("B1", "B2", "B3", "B4", "B5")
RAINBOW_CLASSES = ("B6", "B7", "B8", "B9", "B10")
F1_RESOLVED = "f1-resolved"

# Number of S-coordinates of an event in each class; its probability under a
# uniform bijection S -> Q is 1 / (n - ell)_d.
S_ARITY = {"B1": 3, "B2": 2, "B3": 2, "B4": 1, "B5": 1,
           "B6": 4, "B7": 3, "B8": 2, "B9": 2, "B10": 1}

# Per-class neighbourhood coefficients: each entry (num, a, b) stands for
# num / (a*C - b).  The first tuple bounds the pattern side, the second the
# host side.
CLASS_COEFFS = {
    "B1": ((3, 2, 4),), "B2": ((8, 1, 2),), "B3": ((3, 1, 2),), "B4": ((4, 1, 1),), "B5": ((10, 1, 1),),
    "B6": ((4, 1, 5),), "B7": ((5, 1, 4),), "B8": ((1, 1, 1),), "B9": ((3, 1, 2),), "B10": ((4, 1, 1),),
}
HOST_COEFFS = {
    "B1": ((1, 1, 1),), "B2": ((4, 1, 1),), "B3": ((1, 1, 1),), "B4": ((3, 1, 1),), "B5": ((3, 1, 1),),
    "B6": ((4, 1, 6),), "B7": ((5, 1, 3),), "B8": ((4, 1, 3),), "B9": ((1, 1, 1),), "B10": ((8, 1, 1),),
}
# How many vertices of an event can be shared with a neighbouring event:
# three for a cherry when only cherries are in play, four once disjoint edge
# pairs are added.
MULTIPLIER = {"proper": 3, "rainbow": 4}

SHEARER_PROPER_C = 560
SHEARER_RAINBOW_C = 1512
BKP_LOCAL_C = Fraction(112, 5)
BKP_GLOBAL_C = 51
BKP_GLOBAL_LARGE_C = 42


class LllError(ValueError):
    pass


# --------------------------------------------------------------------------
# thresholds

THRESHOLD_KINDS = ("shearer_proper", "shearer_rainbow", "bkp_local", "bkp_global")


@dataclass(frozen=True)
class ThresholdQuery:
    kind: str
    n: int
    r: int | None = None
    delta: int | None = None

    def __post_init__(self):
        kind = self.kind.replace("-", "_")
        object.__setattr__(self, "kind", kind)
        if kind not in THRESHOLD_KINDS:
            raise LllError(f"unknown threshold kind {self.kind!r}")
        if self.n < 1:
            raise LllError("n must be positive")
        if kind.startswith("shearer"):
            if self.r is None or self.delta is not None:
                raise LllError(f"{kind} needs r (and not delta)")
            if self.r < 0:
                raise LllError("r must be nonnegative")
        else:
            if self.delta is None or self.r is not None:
                raise LllError(f"{kind} needs delta (and not r)")
            if self.delta < 1:
                raise LllError("delta must be at least 1")


@dataclass(frozen=True)
class ThresholdResult:
    query: ThresholdQuery
    k: int
    constant: Fraction
    # r = 0: the hypothesis holds for every k, the value is clamped to n - 1
    clamped: bool = False
    # k < 1: no coloring is k-bounded, so the statement says nothing
    vacuous: bool = False


def _floor_over_r34(n: int, C: Fraction, r: int) -> int:
    """floor(n / (C r^(3/4))) exactly: the largest k with (k C)^4 r^3 <= n^4."""
    if n <= 0:
        return 0
    guess = int(n / (float(C) * r**0.75))
    k = max(guess - 2, 0)

    def ok(k):
        return (k * C) ** 4 * r**3 <= n**4

    while ok(k + 1):
        k += 1
    while k > 0 and not ok(k):
        k -= 1
    return k


def threshold(q: ThresholdQuery) -> ThresholdResult:
    """Largest k the corresponding theorem covers for the given parameters."""
    if q.kind == "shearer_proper" or q.kind == "shearer_rainbow":
        C = Fraction(SHEARER_PROPER_C if q.kind == "shearer_proper" else SHEARER_RAINBOW_C)
        if q.r == 0:
            return ThresholdResult(q, q.n - 1, C, clamped=True)
        k = _floor_over_r34(q.n, C, q.r)
    else:
        if q.kind == "bkp_local":
            C = BKP_LOCAL_C
        else:
            C = Fraction(BKP_GLOBAL_LARGE_C if q.n >= 100 else BKP_GLOBAL_C)
        k = math.floor(Fraction(q.n) / (C * q.delta**2))
    return ThresholdResult(q, k, C, vacuous=k < 1)


def shearer_hypothesis_holds(n: int, r: int, k: int, C: int = SHEARER_PROPER_C) -> bool:
    """Exact test of ``k <= n / (C r^(3/4))``."""
    if r == 0:
        return True
    return (k * C) ** 4 * r**3 <= n**4


def clique_size(r: int) -> int:
    """``ceil(2 r^(1/4))``: the smallest ell with ell^4 >= 16 r."""
    if r <= 0:
        return 0
    ell = max(int(2 * r**0.25) - 1, 0)
    while ell**4 < 16 * r:
        ell += 1
    return ell


# --------------------------------------------------------------------------
# bad events

@dataclass(frozen=True)
class BadEvent:
    """A pattern cherry ``(u1, u2, u3)`` or disjoint pair ``(u1, u2, u3, u4)``
    sent onto a monochromatic host tuple.  Pattern vertices are degree ranks,
    so ``L = {1..ell}``."""

    pattern_tuple: tuple[int, ...]
    host_tuple: tuple[int, ...]
    cls: str

    @property
    def is_cherry(self) -> bool:
        return len(self.pattern_tuple) == 3


def _flag(x) -> bool:
    """True for S, False for L."""
    if isinstance(x, str):
        if x.upper() == "S":
            return True
        if x.upper() == "L":
            return False
        raise LllError(f"membership flag must be 'S' or 'L', got {x!r}")
    return bool(x)


def classify_bad_event(pattern_tuple: Sequence[int], membership: Sequence) -> str:
    """Class ``B1``..``B10`` of an event from the S/L membership of its
    coordinates, or ``"f1-resolved"`` when every coordinate lies in L.

    ``membership[i]`` is ``"S"``/``"L"`` (or a bool, True meaning S) for
    ``pattern_tuple[i]``.
    """
    t = tuple(pattern_tuple)
    if len(membership) != len(t):
        raise LllError("membership must align with the pattern tuple")
    s = tuple(_flag(x) for x in membership)
    if len(t) == 3:
        u1, u2, u3 = t
        if len({u1, u2, u3}) != 3 or not u1 < u3:
            raise LllError(f"cherry tuple {t} must have distinct vertices and u1 < u3")
        if not s[2] and s[0]:
            raise LllError("u3 in L forces u1 in L")
        return {
            (True, True, True): "B1",
            (False, True, True): "B2",
            (True, False, True): "B3",
            (False, False, True): "B4",
            (False, True, False): "B5",
            (False, False, False): F1_RESOLVED,
        }[s]
    if len(t) == 4:
        u1, u2, u3, u4 = t
        if len(set(t)) != 4 or not (u1 < u2 and u3 < u4 and u1 < u3):
            raise LllError(f"pair tuple {t} must satisfy u1<u2, u3<u4, u1<u3")
        if s[0]:
            if not all(s):
                raise LllError("any coordinate in L forces u1 in L")
            return "B6"
        if s[2] and not s[3]:
            raise LllError("u4 in L forces u3 in L")
        return {
            (True, True, True): "B7",
            (False, True, True): "B8",
            (True, False, True): "B9",
            (True, False, False): "B10",
            (False, False, True): "B10",
            (False, False, False): F1_RESOLVED,
        }[s[1:]]
    raise LllError(f"pattern tuple must have 3 or 4 vertices, got {len(t)}")


def _falling(x: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= x - i
    return out


def event_probability(cls: str, n: int, ell: int) -> Fraction:
    """``1 / (n - ell)_d`` with ``d`` the number of S-coordinates of the class."""
    if cls not in S_ARITY:
        raise LllError(f"unknown event class {cls!r}")
    d = S_ARITY[cls]
    if n - ell < d:
        raise LllError(f"n - ell = {n - ell} is too small for a class with {d} random coordinates")
    return Fraction(1, _falling(n - ell, d))


# --------------------------------------------------------------------------
# budgets

def _eval(coeffs, C: Fraction) -> Fraction:
    return sum((Fraction(num) / (a * C - b) for num, a, b in coeffs), Fraction(0))


@dataclass(frozen=True)
class LllBudget:
    C: Fraction
    mode: str
    per_class_terms: dict[str, Fraction]
    total: Fraction
    multipliers: dict[str, int] = field(default_factory=dict)

    def total_str(self) -> str:
        return f"{self.total.numerator}/{self.total.denominator}"


def lll_budget(mode: str, C) -> LllBudget:
    """Upper bound on the probability mass of events S-intersecting any one event.

    Proper mode sums classes B1-B5 with multiplier 3; rainbow mode uses
    multiplier 4 for B1-B5 and adds B6-B10 with multiplier 4.
    """
    C = Fraction(C)
    if C <= 6:
        raise LllError(f"the budget needs C > 6, got {C}")
    if mode == "proper":
        classes = PROPER_CLASSES
        mult = {c: MULTIPLIER["proper"] for c in classes}
    elif mode == "rainbow":
        classes = PROPER_CLASSES + RAINBOW_CLASSES
        mult = {c: MULTIPLIER["rainbow"] for c in classes}
    else:
        raise LllError(f"unknown mode {mode!r}")
    terms = {c: mult[c] * (_eval(CLASS_COEFFS[c], C) + _eval(HOST_COEFFS[c], C)) for c in classes}
    return LllBudget(C, mode, terms, sum(terms.values(), Fraction(0)), mult)


def closed_form_total(mode: str, C) -> Fraction:
    """The aggregated closed forms, independent of the per-class tables."""
    C = Fraction(C)
    cherries = lambda m: m * Fraction(25) / (2 * C - 4) + m * Fraction(26) / (C - 1)  # noqa: E731
    if mode == "proper":
        return cherries(3)
    if mode == "rainbow":
        pairs = (Fraction(4 * 14) / (C - 1) + Fraction(4 * 3) / (C - 2) + Fraction(4 * 9) / (C - 3)
                 + Fraction(4 * 5) / (C - 4) + Fraction(4 * 4) / (C - 5) + Fraction(4 * 4) / (C - 6))
        return cherries(4) + pairs
    raise LllError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class FeasibilityVerdict:
    ok: bool
    single_event_ok: bool
    budget_ok: bool
    max_event_probability: Fraction | None
    budget_total: Fraction


def lll_feasibility_check(n: int, ell: int, budget: LllBudget) -> FeasibilityVerdict:
    """Both local-lemma conditions: ``1/(n - ell) <= 1/4`` and ``total <= 1/4``."""
    quarter = Fraction(1, 4)
    if n - ell <= 0:
        p = None
        single = False
    else:
        p = Fraction(1, n - ell)
        single = p <= quarter
    within = budget.total <= quarter
    return FeasibilityVerdict(single and within, single, within, p, budget.total)
