"""Verdicts on the log-concavity inequality at the pinned chain and the full
extremal characterization battery."""

from __future__ import annotations

from dataclasses import dataclass, field

from .criticality import (
    CLASS_SUPERCRITICAL,
    DegenerateInstance,
    abar_gap,
    alpha_mask,
    classify,
    splitting_pairs,
)
from .linext import VARIANTS, companions, iter_extensions
from .poset import iter_mask, popcount, validate_config

STRICT, EQUALITY, DEGENERATE = "strict", "equality", "degenerate"


@dataclass
class StanleyVerdict:
    counts: tuple
    relation: str

    @property
    def equality(self):
        return self.relation == EQUALITY


def stanley(p, c):
    """Exact verdict on (middle count)^2 vs the product of the outer counts.

    The inequality itself is asserted, never assumed; a violation means the
    counting code is wrong.
    """
    from .linext import all_counts

    minus, equal, plus = all_counts(p, c)
    if equal * equal < minus * plus:
        raise AssertionError(f"log-concavity violated: {(minus, equal, plus)}")
    if equal == 0:
        relation = DEGENERATE
    elif equal * equal == minus * plus:
        relation = EQUALITY
    else:
        relation = STRICT
    return StanleyVerdict((minus, equal, plus), relation)


def trivial_witness(p, c):
    """First splitting pair whose between-block outgrows its position window.

    Such a pair exists iff no extension pins the whole chain (the middle
    family is empty); pairs are scanned in lexicographic order.
    """
    for r, s in splitting_pairs(c):
        if abar_gap(p, c, r + 1, s) > c.position(s, p.n) - c.position(r + 1, p.n) - 1:
            return (r, s)
    return None


def posetchar(p, c):
    """Poset-side reformulation of the all-companions-incomparable condition.

    Every non-chain element below the mover must be crowded against some
    higher chain element, and dually above; evaluated directly on p, no
    closure involved.
    """
    if c.ell is None:
        raise DegenerateInstance("posetchar needs ell")
    x_ell = c.chain[c.ell - 1]
    i_ell = c.positions[c.ell - 1]
    alpha = alpha_mask(p, c)
    n = p.n

    for y in iter_mask(alpha & p.down[x_ell]):
        ok = False
        for s in range(1, c.k + 2):
            if s <= c.k and not p.less(y, c.chain[s - 1]):
                continue
            below = p.full_mask if s == c.k + 1 else p.down[c.chain[s - 1]]
            crowd = popcount(p.up[y] & below)
            if crowd > c.position(s, n) - i_ell:
                ok = True
                break
        if not ok:
            return False
    for y in iter_mask(alpha & p.up[x_ell]):
        ok = False
        for r in range(0, c.k + 1):
            if r >= 1 and not p.less(c.chain[r - 1], y):
                continue
            above = p.full_mask if r == 0 else p.up[c.chain[r - 1]]
            crowd = popcount(p.down[y] & above)
            if crowd > i_ell - c.position(r, n):
                ok = True
                break
        if not ok:
            return False
    return True


@dataclass
class CharacterizationReport:
    counts: tuple
    criticality: str
    balance: bool
    equality: bool
    supercritical_iii: bool
    critical_iii: bool
    n1: int | None
    n2: int | None
    companion_incomparability: bool
    posetchar: bool
    closure_applied: bool
    added_relations: list = field(default_factory=list)

    def as_json(self):
        return {
            "counts": {v: n for v, n in zip(VARIANTS, self.counts)},
            "class": self.criticality,
            "balance": self.balance,
            "equality": self.equality,
            "supercritical_iii": self.supercritical_iii,
            "critical_iii": self.critical_iii,
            "N1": self.n1,
            "N2": self.n2,
            "companion_incomparability": self.companion_incomparability,
            "posetchar": self.posetchar,
            "closure_applied": self.closure_applied,
            "added_relations": [list(pair) for pair in self.added_relations],
        }


def characterize(p, c, auto_closure=True):
    """Evaluate every clause of the extremal characterization.

    Works on the closure of the instance by default (verdicts on the counts
    are closure-invariant and the companion clauses transfer downward); pass
    auto_closure=False for differential testing on the raw poset.
    """
    from .transforms import NoExtensions, closure

    if not validate_config(p, c):
        raise ValueError("invalid chain configuration")
    if c.ell is None:
        raise DegenerateInstance("characterization needs ell")

    added = []
    work = p
    applied = False
    if auto_closure:
        try:
            result = closure(p, c)
        except NoExtensions:
            raise DegenerateInstance("no extensions; characterization undefined")
        work, added, applied = result.closed, result.added_relations, True

    x_ell = c.chain[c.ell - 1]
    cells = {(v, a, b): 0 for v in VARIANTS for a in (False, True) for b in (False, True)}
    addendum_ok = True
    for v in VARIANTS:
        for place in iter_extensions(work, c, v):
            lo, up = companions(place, c, v)
            lo_cmp = work.comparable(lo, x_ell)
            up_cmp = work.comparable(up, x_ell)
            cells[v, lo_cmp, up_cmp] += 1
            if lo_cmp != up_cmp and work.comparable(lo, up):
                addendum_ok = False

    counts = tuple(
        sum(cells[v, a, b] for a in (False, True) for b in (False, True))
        for v in VARIANTS
    )
    if counts[1] == 0:
        raise DegenerateInstance("middle family empty; characterization undefined")

    supercritical_iii = all(
        cells[v, a, b] == 0
        for v in VARIANTS
        for a in (False, True)
        for b in (False, True)
        if a or b
    )
    no_double = all(cells[v, True, True] == 0 for v in VARIANTS)
    singles = [cells[v, a, b] for v in VARIANTS for a, b in ((False, True), (True, False))]
    pures = [cells[v, False, False] for v in VARIANTS]
    critical_iii = no_double and len(set(singles)) == 1 and len(set(pures)) == 1
    n1 = singles[0] if critical_iii else None
    n2 = pures[0] if critical_iii else None

    return CharacterizationReport(
        counts=counts,
        criticality=classify(work, c),
        balance=counts[0] == counts[1] == counts[2],
        equality=counts[1] ** 2 == counts[0] * counts[2],
        supercritical_iii=supercritical_iii,
        critical_iii=critical_iii,
        n1=n1,
        n2=n2,
        companion_incomparability=addendum_ok,
        posetchar=posetchar(work, c),
        closure_applied=applied,
        added_relations=added,
    )


def equivalence_audit(p, c, auto_closure=True):
    """Re-derive every proved implication between the characterization clauses
    on one instance; a False entry flags an implementation bug, not a finding."""
    from .linext import decompose

    report = characterize(p, c, auto_closure=auto_closure)
    work = p
    if auto_closure:
        from .transforms import closure

        work = closure(p, c).closed
    table = decompose(work, c)

    checks = {}
    checks["ii_implies_i"] = (not report.balance) or report.equality
    checks["iii_crit_implies_ii"] = (not report.critical_iii) or report.balance
    checks["i_implies_iii_crit"] = (not report.equality) or report.critical_iii
    checks["iii_sup_implies_iii_crit"] = (
        not report.supercritical_iii
    ) or report.critical_iii
    if report.criticality == CLASS_SUPERCRITICAL:
        checks["i_implies_iii_sup"] = (not report.equality) or report.supercritical_iii
    eq_cells = [
        table["equal", False, True],
        table["equal", True, False],
        table["equal", True, True],
    ]
    checks["suff_a"] = report.supercritical_iii == (sum(eq_cells) == 0)
    if report.equality:
        outer = table["minus", True, True] + table["plus", True, True]
        checks["suff_b"] = report.critical_iii == (outer == 0)
        checks["addendum"] = report.companion_incomparability
    if c.k <= 2 and report.equality:
        checks["small_k_supercritical"] = report.supercritical_iii
    # the poset-side condition always forces incomparable companions; the
    # converse direction holds on the closed poset
    checks["posetchar_implies_iii"] = (not report.posetchar) or report.supercritical_iii
    if auto_closure:
        checks["posetchar_equiv"] = report.posetchar == report.supercritical_iii
    checks["ok"] = all(checks.values())
    return {"report": report, "checks": checks}
