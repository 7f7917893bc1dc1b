"""Placement bounds and the exact feasibility criterion for single elements."""

from __future__ import annotations

from .linext import OFFSET, VARIANTS, iter_extensions
from .poset import popcount


def chain_index_bounds(p, c, y):
    """(i_max, i_min): the extreme chain indices below/above y, sentinels
    included, so i_max >= 0 and i_min <= k+1 always."""
    i_max = 0
    i_min = c.k + 1
    for j, x in enumerate(c.chain, start=1):
        if p.less(x, y):
            i_max = j
        if p.less(y, x) and i_min == c.k + 1:
            i_min = j
    return i_max, i_min


def _pinned_pos(p, c, j, v):
    base = c.position(j, p.n)
    if c.ell is not None and j == c.ell:
        base += OFFSET[v]
    return base


def bounds(p, c, y, v):
    """Formula bounds (l, u) on where y can sit in the v family.

    Each chain element below y pushes y up by the count it drags along;
    dually above.  Sentinels make both optimizations nonempty.
    """
    i_max, i_min = chain_index_bounds(p, c, y)
    y_bit = 1 << y
    best_l = 0
    for r in range(0, i_max + 1):
        if r == 0:
            above = p.full_mask
        else:
            above = p.up[c.chain[r - 1]]
        drag = popcount(above & (p.down[y] | y_bit))
        best_l = max(best_l, _pinned_pos(p, c, r, v) + drag)
    best_u = p.n + 1
    for s in range(i_min, c.k + 2):
        if s == c.k + 1:
            below = p.full_mask
        else:
            below = p.down[c.chain[s - 1]]
        drag = popcount(below & (p.up[y] | y_bit))
        best_u = min(best_u, _pinned_pos(p, c, s, v) - drag)
    return best_l, best_u


def feasible(p, c, y, v, i):
    """Formula verdict: can y sit at position i in some member of the family?

    Exact iff the family is nonempty; see feasible_oracle for the other route.
    """
    l, u = bounds(p, c, y, v)
    if not l <= i <= u:
        return False
    slots = {_pinned_pos(p, c, m, v) for m in range(1, c.k + 1)}
    return i not in slots


def feasible_oracle(p, c, y, v, i):
    """Enumeration verdict, independent of the bound formulas."""
    return any(place[y] == i for place in iter_extensions(p, c, v))


def attained(p, c, y, v):
    """Sorted positions y actually takes across the family."""
    return sorted({place[y] for place in iter_extensions(p, c, v)})


def profile(p, c):
    """Per-element table of index bounds, formula bounds, and attained extremes."""
    from .poset import chain_mask

    cmask = chain_mask(c)
    out = {}
    for y in range(p.n):
        if cmask >> y & 1:
            continue
        i_max, i_min = chain_index_bounds(p, c, y)
        row = {"i_max": i_max, "i_min": i_min}
        for v in VARIANTS:
            l, u = bounds(p, c, y, v)
            got = attained(p, c, y, v)
            row[v] = {
                "l": l,
                "u": u,
                "m_min": got[0] if got else None,
                "m_max": got[-1] if got else None,
            }
        out[y] = row
    return out
