"""Linear extensions with pinned chain positions: enumeration, exact counting,
companions, and the companion-comparability decomposition of the three counts."""

from __future__ import annotations

from dataclasses import dataclass

from .poset import validate_config

MINUS, EQUAL, PLUS = "minus", "equal", "plus"
VARIANTS = (MINUS, EQUAL, PLUS)
OFFSET = {MINUS: -1, EQUAL: 0, PLUS: 1}


def variant_offset(v):
    return OFFSET[v]


def pinned_positions(p, c, v):
    """Map position -> forced chain element for extensions in the v family.

    The distinguished element moves by the variant offset; with ell unset all
    chain elements are pinned exactly and the variant is irrelevant.
    """
    pins = {}
    for j, (x, i) in enumerate(zip(c.chain, c.positions), start=1):
        pos = i + (OFFSET[v] if c.ell == j else 0)
        pins[pos] = x
    return pins


def _check(p, c):
    if not validate_config(p, c):
        raise ValueError("invalid chain configuration")


def iter_extensions(p, c, v=EQUAL):
    """Yield the placements of the v family exactly once each.

    A placement is a tuple place[e] = position of element e (1-based).  The
    stream is lexicographic in the word read off positions 1..n, which the
    position-major backtracking below produces for free.
    """
    _check(p, c)
    yield from _iter_pinned(p, pinned_positions(p, c, v))


def _iter_pinned(p, pins):
    n = p.n
    down = p.down
    chain_elems = set(pins.values())
    free = [e for e in range(n) if e not in chain_elems]
    place = [0] * n
    pin_items = sorted(pins.items())

    def feasible(t, placed):
        # every future pin must still have room for its unplaced down-set
        for pos, x in pin_items:
            if pos >= t:
                need = bin(down[x] & ~placed).count("1")
                if need > pos - t:
                    return False
        return True

    def rec(t, placed):
        if t > n:
            yield tuple(place)
            return
        forced = pins.get(t)
        if forced is not None:
            if down[forced] & ~placed:
                return
            place[forced] = t
            yield from rec(t + 1, placed | (1 << forced))
            return
        for e in free:
            if placed >> e & 1 or down[e] & ~placed:
                continue
            place[e] = t
            new = placed | (1 << e)
            if feasible(t + 1, new):
                yield from rec(t + 1, new)

    for pos, _ in pin_items:
        if not (1 <= pos <= n):
            return
    if not feasible(1, 0):
        return
    yield from rec(1, 0)


def count_extensions(p, c, v=EQUAL):
    """|N_v| by dynamic programming over the down-set lattice (no streaming)."""
    _check(p, c)
    return _count_pinned(p, pinned_positions(p, c, v))


def _count_pinned(p, pins):
    n = p.n
    down = p.down
    for pos in pins:
        if not (1 <= pos <= n):
            return 0
    chain_mask = 0
    for x in pins.values():
        chain_mask |= 1 << x
    memo = {}
    full = p.full_mask

    def rec(placed):
        if placed == full:
            return 1
        got = memo.get(placed)
        if got is not None:
            return got
        t = bin(placed).count("1") + 1
        forced = pins.get(t)
        total = 0
        if forced is not None:
            if not down[forced] & ~placed:
                total = rec(placed | (1 << forced))
        else:
            rest = full & ~placed & ~chain_mask
            e = 0
            m = rest
            while m:
                if m & 1 and not down[e] & ~placed:
                    total += rec(placed | (1 << e))
                m >>= 1
                e += 1
        memo[placed] = total
        return total

    return rec(0)


def all_counts(p, c):
    """(|N_minus|, |N_equal|, |N_plus|) as exact integers."""
    return tuple(count_extensions(p, c, v) for v in VARIANTS)


def companions(place, c, v):
    """(lower, upper) companion elements of the moving chain element.

    They occupy the two slots of {i_ell-1, i_ell, i_ell+1} not taken by it;
    place must belong to the v family.
    """
    if c.ell is None:
        raise ValueError("companions need a distinguished chain element")
    i_ell = c.positions[c.ell - 1]
    taken = i_ell + OFFSET[v]
    slots = sorted({i_ell - 1, i_ell, i_ell + 1} - {taken})
    inv = {pos: e for e, pos in enumerate(place)}
    return inv[slots[0]], inv[slots[1]]


@dataclass
class DecompositionTable:
    """Counts of each family split by companion comparability to the mover.

    cells maps (variant, lower_comparable, upper_comparable) -> count; the
    four cells of a variant sum to that family's total.
    """

    cells: dict

    def __getitem__(self, key):
        return self.cells[key]

    def total(self, v):
        return sum(self.cells[v, a, b] for a in (False, True) for b in (False, True))

    def as_json(self):
        tag = {False: "inc", True: "cmp"}
        return {
            f"{v}({tag[a]},{tag[b]})": self.cells[v, a, b]
            for v in VARIANTS
            for a in (False, True)
            for b in (False, True)
        }


def decompose(p, c):
    """Full companion decomposition table for all three families."""
    _check(p, c)
    if c.ell is None:
        raise ValueError("decompose needs a distinguished chain element")
    x_ell = c.chain[c.ell - 1]
    cells = {(v, a, b): 0 for v in VARIANTS for a in (False, True) for b in (False, True)}
    for v in VARIANTS:
        for place in iter_extensions(p, c, v):
            lo, up = companions(place, c, v)
            cells[v, p.comparable(lo, x_ell), p.comparable(up, x_ell)] += 1
    return DecompositionTable(cells)


def a_sequence(p, x):
    """a_i = number of linear extensions placing x at position i, i = 1..n."""
    return [_count_pinned(p, {i: x}) for i in range(1, p.n + 1)]
