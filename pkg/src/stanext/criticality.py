"""Criticality dictionary: beta slices, span dimensions of polytope
collections, the poset criticality class, splitting pairs, and mixing."""

from __future__ import annotations

from .linext import EQUAL, OFFSET
from .poset import (
    PosetError,
    above_chain_index,
    below_chain_index,
    between_chain,
    chain_mask,
    mask_to_set,
    popcount,
)

CLASS_SUPERCRITICAL = "supercritical"
CLASS_CRITICAL = "critical"          # critical but not supercritical
CLASS_SUBCRITICAL = "subcritical"    # subcritical only
CLASS_NOT_SUBCRITICAL = "not_subcritical"

PAIR_SUPERCRITICAL = "supercritical"
PAIR_SHARP_CRITICAL = "sharp_critical"
PAIR_OTHER = "other"


class DegenerateInstance(PosetError):
    """Raised where a notion presumes a nonempty middle family of extensions."""


class EmptyCollection(PosetError):
    pass


class NotEllSplitting(PosetError):
    pass


def alpha_mask(p, c):
    return p.full_mask & ~chain_mask(c)


def beta(p, c, i):
    """The slice of non-chain elements placeable between x_i and x_{i+1}."""
    return mask_to_set(beta_mask(p, c, i))


def beta_mask(p, c, i):
    if i < 0 or i > c.k:
        return 0
    below = below_chain_index(p, c, i)   # alpha_{<x_i} up to chain bits
    above = above_chain_index(p, c, i + 1)
    return alpha_mask(p, c) & ~below & ~above


def beta_union_mask(p, c, support):
    m = 0
    for i in support:
        m |= beta_mask(p, c, i)
    return m


def abar_gap(p, c, a_idx, b_idx):
    """|elements strictly between x_{a_idx} and x_{b_idx}|, chain included."""
    return popcount(between_chain(p, c, a_idx, b_idx))


def alpha_gap(p, c, a_idx, b_idx):
    return popcount(between_chain(p, c, a_idx, b_idx) & alpha_mask(p, c))


def canonical_multiplicity(p, c, j):
    """Copies of the j-th slice polytope in the canonical mixed-volume body
    list: one per open slot between x_j and x_{j+1}, minus one around the
    moving element."""
    if c.ell is None:
        raise DegenerateInstance("canonical multiplicities need ell")
    red = 1 if j in (c.ell - 1, c.ell) else 0
    return c.position(j + 1, p.n) - c.position(j, p.n) - 1 - red


def slice_multiplicity(p, c, j):
    """Unreduced copies: every open slot between x_j and x_{j+1}."""
    return c.position(j + 1, p.n) - c.position(j, p.n) - 1


def collection_dim(p, c, support):
    """dim of the Minkowski sum of slice polytopes over the support indices.

    Computed by the span rule: n-k minus the sizes of the non-chain gaps
    between consecutive support indices (sentinels -1 and k+1 added).
    """
    support = sorted(set(support))
    if not support:
        raise EmptyCollection("collection has no polytopes")
    if support[0] < 0 or support[-1] > c.k:
        raise PosetError(f"support index out of range: {support}")
    total = p.n - c.k
    walk = [-1] + support + [c.k + 1]
    for a, b in zip(walk, walk[1:]):
        if a + 1 < b:
            total -= alpha_gap(p, c, a + 1, b)
    return total


def admissible_supports(p, c):
    """Nonempty subsets of slice indices with positive canonical multiplicity."""
    positive = [j for j in range(c.k + 1) if canonical_multiplicity(p, c, j) > 0]
    out = []
    for bits in range(1, 1 << len(positive)):
        out.append(tuple(positive[t] for t in range(len(positive)) if bits >> t & 1))
    return out


def _inequality_form(p, c, support, cvalue):
    """The poset-side criticality inequality for one support set."""
    lhs = 0
    rhs = 0
    walk = [-1] + list(support) + [c.k + 1]
    for a, b in zip(walk, walk[1:]):
        if a + 1 < b:
            lhs += abar_gap(p, c, a + 1, b)
            rhs += c.position(b, p.n) - c.position(a + 1, p.n) - 1
    hits = sum(1 for j in support if j in (c.ell - 1, c.ell))
    return lhs <= hits - cvalue + rhs


def _dimension_form(p, c, support, cvalue):
    size = sum(canonical_multiplicity(p, c, j) for j in support)
    return collection_dim(p, c, support) >= size + cvalue


def holds_at_level(p, c, cvalue):
    """True iff every admissible sub-collection clears the level-c dimension bar.

    The dimension form and the gap-counting inequality form are evaluated
    independently for every support and must agree.
    """
    ok = True
    for support in admissible_supports(p, c):
        dim_ok = _dimension_form(p, c, support, cvalue)
        ineq_ok = _inequality_form(p, c, support, cvalue)
        if dim_ok != ineq_ok:
            raise AssertionError(
                f"criticality forms disagree at c={cvalue}, support={support}"
            )
        ok = ok and dim_ok
    return ok


def classify(p, c):
    """Criticality class of the instance; needs a nonempty middle family."""
    from .extremal import trivial_witness

    if c.ell is None:
        raise DegenerateInstance("classification needs ell")
    if trivial_witness(p, c) is not None:
        raise DegenerateInstance("no extension pins the chain; class undefined")
    if holds_at_level(p, c, 2):
        return CLASS_SUPERCRITICAL
    if holds_at_level(p, c, 1):
        return CLASS_CRITICAL
    if holds_at_level(p, c, 0):
        return CLASS_SUBCRITICAL
    return CLASS_NOT_SUBCRITICAL


def splitting_pairs(c):
    """All (r, s) with 0 <= r+1 < s <= k+1, excluding the full span."""
    out = []
    for r in range(-1, c.k + 1):
        for s in range(r + 2, c.k + 2):
            if (r + 1, s) == (0, c.k + 1):
                continue
            out.append((r, s))
    return out


def ell_splitting_pairs(c):
    if c.ell is None:
        return []
    return [(r, s) for r, s in splitting_pairs(c) if r + 1 < c.ell < s]


def pair_support(c, pair):
    r, s = pair
    return tuple(range(0, r + 1)) + tuple(range(s, c.k + 1))


def pair_excess(p, c, pair):
    """dim minus size for the pair's full-multiplicity collection.

    Zero-multiplicity slices carry no polytope and are dropped from the span.
    """
    support = [j for j in pair_support(c, pair) if slice_multiplicity(p, c, j) > 0]
    if not support:
        return None
    size = sum(slice_multiplicity(p, c, j) for j in support)
    return collection_dim(p, c, support) - size


def pair_criticality(p, c, pair):
    """Classify an ell-splitting pair by its collection's dimension excess."""
    r, s = pair
    if c.ell is None or not (r + 1 < c.ell < s) or (r, s) not in splitting_pairs(c):
        raise NotEllSplitting(f"{pair} is not an ell-splitting pair")
    excess = pair_excess(p, c, pair)
    if excess is None:
        return PAIR_OTHER
    if excess >= 2:
        return PAIR_SUPERCRITICAL
    if excess == 1:
        return PAIR_SHARP_CRITICAL
    return PAIR_OTHER


def sharp_critical_pairs(p, c):
    return [
        pair
        for pair in ell_splitting_pairs(c)
        if pair_criticality(p, c, pair) == PAIR_SHARP_CRITICAL
    ]


def maximal_splitting_pair(p, c):
    """Componentwise extremum of the sharp-critical ell-splitting pairs."""
    sharp = sharp_critical_pairs(p, c)
    if not sharp:
        return None
    return max(r for r, _ in sharp), min(s for _, s in sharp)


def maximal_pair_regions(p, c):
    """(pair, outer slice union, inner complement) for the maximal pair.

    The complement of the outer region inside the non-chain elements is
    exactly the set strictly between the pair's bounding chain members.
    """
    pair = maximal_splitting_pair(p, c)
    if pair is None:
        return None
    r_max, s_min = pair
    outer = beta_union_mask(p, c, pair_support(c, pair))
    inner = alpha_mask(p, c) & ~outer
    assert inner == between_chain(p, c, r_max + 1, s_min) & alpha_mask(p, c)
    return pair, mask_to_set(outer), mask_to_set(inner)


def mixed_positions(p, c, pair, v=EQUAL):
    """Positions strictly inside the pair's window that are off-chain for v."""
    r, s = pair
    lo = c.position(r + 1, p.n)
    hi = c.position(s, p.n)
    slots = set()
    for m in range(max(r + 1, 1), min(s, c.k) + 1):
        slots.add(c.positions[m - 1] + (OFFSET[v] if m == c.ell else 0))
    return [i for i in range(max(lo, 1), min(hi, p.n) + 1) if i not in slots]


def mixed_elements(p, c, place, pair, v=EQUAL):
    """Mixed elements of one extension for a splitting pair: members of the
    two boundary slices placed strictly inside the window off the chain slots."""
    r, s = pair
    eligible = beta_mask(p, c, r) | beta_mask(p, c, s)
    inv = {pos: e for e, pos in enumerate(place)}
    found = set()
    for pos in mixed_positions(p, c, pair, v):
        e = inv[pos]
        if eligible >> e & 1:
            found.add(e)
    return frozenset(found)
