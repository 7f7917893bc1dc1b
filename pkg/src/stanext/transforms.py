"""Closure and splitting transforms on chain-pinned instances."""

from __future__ import annotations

from dataclasses import dataclass

from .linext import VARIANTS, _count_pinned, iter_extensions, pinned_positions
from .poset import ChainConfig, Poset, PosetError, iter_mask


class NoExtensions(PosetError):
    """The three families are all empty; the closure is undefined."""


class EllOnBoundary(PosetError):
    pass


class MalformedSplit(PosetError):
    """An element sits strictly between two members of the extracted block."""


@dataclass
class ClosureResult:
    closed: Poset
    added_relations: list

    @property
    def changed(self):
        return bool(self.added_relations)


def closure(p, c):
    """Poset whose relations are exactly those respected by every extension
    in the three families.  Original relations are always preserved."""
    n = p.n
    lt = [p.full_mask & ~(1 << w) for w in range(n)]
    seen = False
    for v in VARIANTS:
        for place in iter_extensions(p, c, v):
            seen = True
            order = sorted(range(n), key=lambda e: place[e])
            suffix = 0
            for e in reversed(order):
                lt[e] &= suffix
                suffix |= 1 << e
    if not seen:
        raise NoExtensions("all three families are empty")
    closed = Poset(n, lt)
    added = sorted(set(closed.pairs()) - set(p.pairs()))
    for a, b in p.pairs():
        if not closed.less(a, b):
            raise AssertionError("closure dropped an original relation")
    return ClosureResult(closed, added)


@dataclass
class SplitResult:
    """Both halves of a split, each as (poset, config), with provenance.

    case is 1 when the moving chain element lands strictly inside the
    extracted block and 2 otherwise; to_parent maps each part's ids back to
    parent ids, with the compressed element mapped to the whole block.
    """

    pair: tuple
    case: int
    part1: tuple
    part2: tuple
    to_parent_1: dict
    to_parent_2: dict
    compressed: int


def split(p, c, pair):
    """Split the instance along a splitting pair (r, s).

    The block between x_{r+1} and x_s (inclusive) becomes part 1; the rest,
    with the block compressed to a single fresh element, becomes part 2.
    Position targets shift so each part is a standalone instance.
    """
    from .criticality import splitting_pairs

    r, s = pair
    if pair not in splitting_pairs(c):
        raise PosetError(f"{pair} is not a splitting pair")
    if c.ell is not None and c.ell in (r + 1, s):
        raise EllOnBoundary(f"moving index {c.ell} sits on the split boundary")

    n, k = p.n, c.k
    lo_real = r + 1 >= 1
    hi_real = s <= k

    block = p.full_mask
    if lo_real:
        x_lo = c.chain[r]
        block &= p.up[x_lo] | (1 << x_lo)
    if hi_real:
        x_hi = c.chain[s - 1]
        block &= p.down[x_hi] | (1 << x_hi)

    outside = p.full_mask & ~block
    below_some = 0
    above_some = 0
    for w in iter_mask(block):
        above_some |= p.up[w]
        below_some |= p.down[w]
    sandwich = outside & above_some & below_some
    if sandwich:
        raise MalformedSplit(f"elements {sorted(iter_mask(sandwich))} are "
                             "strictly between two block members")

    i_lo = c.position(r + 1, n)
    i_hi = c.position(s, n)
    case = 1 if (c.ell is not None and r + 2 <= c.ell <= s - 1) else 2

    # part 1: the block, chain indices r+1..s, positions shifted to 1-based
    block_ids = sorted(iter_mask(block))
    poset1, remap1 = p.restrict(block_ids)
    shift1 = i_lo - (1 if lo_real else 0)
    chain1 = []
    pos1 = []
    ell1 = None
    for j in range(max(r + 1, 1), min(s, k) + 1):
        chain1.append(remap1[c.chain[j - 1]])
        pos1.append(c.positions[j - 1] - shift1)
        if case == 1 and j == c.ell:
            ell1 = len(chain1)
    config1 = ChainConfig(tuple(chain1), tuple(pos1), ell1)

    # part 2: the complement plus one fresh element compressing the block
    rest_ids = sorted(iter_mask(outside))
    poset2_base, remap2 = p.restrict(rest_ids)
    x_new = poset2_base.n
    rows = list(poset2_base.up) + [0]
    for old in rest_ids:
        if below_some >> old & 1:        # old < some block member
            rows[remap2[old]] |= 1 << x_new
        if above_some >> old & 1:        # some block member < old
            rows[x_new] |= 1 << remap2[old]
    from .poset import _closure_rows

    rows = _closure_rows(x_new + 1, rows)
    poset2 = Poset(x_new + 1, rows)

    shift2 = 1 if r + 1 == 0 else 0      # the compressed block would pin at 0
    chain2 = []
    pos2 = []
    ell2 = None
    for j in range(1, r + 1):
        chain2.append(remap2[c.chain[j - 1]])
        pos2.append(c.positions[j - 1] + shift2)
        if case == 2 and j == c.ell:
            ell2 = len(chain2)
    chain2.append(x_new)
    pos2.append(i_lo + shift2)
    for j in range(s + 1, k + 1):
        chain2.append(remap2[c.chain[j - 1]])
        pos2.append(c.positions[j - 1] - (i_hi - i_lo) + shift2)
        if case == 2 and j == c.ell:
            ell2 = len(chain2)
    config2 = ChainConfig(tuple(chain2), tuple(pos2), ell2)

    return SplitResult(
        pair=pair,
        case=case,
        part1=(poset1, config1),
        part2=(poset2, config2),
        to_parent_1={new: old for old, new in remap1.items()},
        to_parent_2={new: old for old, new in remap2.items()},
        compressed=x_new,
    )


def part_counts(part):
    """(minus, equal, plus) counts for a split part, 0 when a pin is out of range."""
    poset, config = part
    return tuple(
        _count_pinned(poset, pinned_positions(poset, config, v)) for v in VARIANTS
    )


def verify_split_reduction(p, c, pair):
    """Check the split bookkeeping on one pair and report what was provable.

    On a rigid pair (block gap exactly fills the window) the three parent
    counts must factor through the parts, and parent equality must descend
    to both parts.  On a non-rigid pair no identity is claimed.
    """
    from .criticality import abar_gap
    from .linext import all_counts

    r, s = pair
    result = split(p, c, pair)
    gap = abar_gap(p, c, r + 1, s)
    window = c.position(s, p.n) - c.position(r + 1, p.n) - 1
    rigid = gap == window

    parent = all_counts(p, c)
    counts1 = part_counts(result.part1)
    counts2 = part_counts(result.part2)

    report = {
        "pair": pair,
        "case": result.case,
        "rigid": rigid,
        "parent_counts": parent,
        "part1_counts": counts1,
        "part2_counts": counts2,
        "product_identity": None,
        "parent_equality": parent[1] ** 2 == parent[0] * parent[2] and parent[1] > 0,
        "parts_equality": None,
        "ok": True,
    }
    if rigid:
        product_ok = all(
            parent[t] == counts1[t] * counts2[t] for t in range(3)
        )
        report["product_identity"] = product_ok
        report["ok"] = product_ok
        if report["parent_equality"]:
            eq1 = counts1[1] ** 2 == counts1[0] * counts1[2]
            eq2 = counts2[1] ** 2 == counts2[0] * counts2[2]
            report["parts_equality"] = (eq1, eq2)
            report["ok"] = report["ok"] and eq1 and eq2
    return report
