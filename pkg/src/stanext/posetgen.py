"""Exhaustive and randomized generation of small posets for the sweep.

Labeled posets are built by extending with one element at a time, choosing a
down-set and a compatible up-set; transitivity is maintained incrementally.
Isomorphism reduction uses a color-refinement signature followed by an exact
minimum-encoding search over color-preserving permutations.
"""

from __future__ import annotations

from itertools import permutations

from .poset import Poset


def iter_labeled_up_rows(n):
    """Yield the up-row tuples of every labeled transitively-closed strict
    order on range(n), each exactly once."""
    if n == 0:
        yield ()
        return
    for rows in iter_labeled_up_rows(n - 1):
        m = n - 1
        down_masks = [0] * m
        for a in range(m):
            row = rows[a]
            b = 0
            while row:
                if row & 1:
                    down_masks[b] |= 1 << a
                row >>= 1
                b += 1
        full = (1 << m) - 1
        for d_mask in range(1 << m):
            ok = True
            common_up = full
            for a in range(m):
                if d_mask >> a & 1:
                    if down_masks[a] & ~d_mask:
                        ok = False
                        break
                    common_up &= rows[a]
            if not ok:
                continue
            u_mask = common_up
            while True:
                good = True
                for b in range(m):
                    if u_mask >> b & 1 and rows[b] & ~u_mask:
                        good = False
                        break
                if good and not (d_mask & u_mask):
                    new_rows = tuple(
                        rows[a] | (1 << m if d_mask >> a & 1 else 0) for a in range(m)
                    ) + (u_mask,)
                    yield new_rows
                if u_mask == 0:
                    break
                u_mask = (u_mask - 1) & common_up


def _colors(n, rows):
    """Stable vertex coloring refined by the multiset of neighbor colors."""
    down = [0] * n
    for a in range(n):
        row = rows[a]
        b = 0
        while row:
            if row & 1:
                down[b] |= 1 << a
            row >>= 1
            b += 1
    keys = [(bin(rows[a]).count("1"), bin(down[a]).count("1")) for a in range(n)]
    table = {key: t for t, key in enumerate(sorted(set(keys)))}
    color = [table[key] for key in keys]
    while True:
        keys = [
            (
                color[a],
                tuple(sorted(color[b] for b in range(n) if rows[a] >> b & 1)),
                tuple(sorted(color[b] for b in range(n) if down[a] >> b & 1)),
            )
            for a in range(n)
        ]
        table = {key: t for t, key in enumerate(sorted(set(keys)))}
        new = [table[key] for key in keys]
        if new == color:
            return color
        color = new


def _apply_perm(n, rows, perm):
    """Relabel: perm[a] is the new id of a; returns new up-row tuple."""
    out = [0] * n
    for a in range(n):
        row = rows[a]
        new_row = 0
        b = 0
        while row:
            if row & 1:
                new_row |= 1 << perm[b]
            row >>= 1
            b += 1
        out[perm[a]] = new_row
    return tuple(out)


def _color_blocks(n, color):
    order = sorted(range(n), key=lambda a: (color[a], a))
    blocks = []
    start = 0
    for t in range(1, n + 1):
        if t == n or color[order[t]] != color[order[start]]:
            blocks.append(order[start:t])
            start = t
    return blocks


def _slot_perms(n, blocks):
    """Maps element -> canonical slot, elements of one color filling one
    contiguous slot block in every order."""

    def rec(b, base, perm):
        if b == len(blocks):
            yield tuple(perm)
            return
        block = blocks[b]
        for arrangement in permutations(block):
            for t, a in enumerate(arrangement):
                perm[a] = base + t
            yield from rec(b + 1, base + len(block), perm)

    yield from rec(0, 0, [0] * n)


def _class_bijections(n, blocks):
    """Permutations mapping every color class onto itself."""

    def rec(b, perm):
        if b == len(blocks):
            yield tuple(perm)
            return
        block = blocks[b]
        for arrangement in permutations(block):
            for a, target in zip(block, arrangement):
                perm[a] = target
            yield from rec(b + 1, perm)

    yield from rec(0, [0] * n)


def canonical_data(n, rows):
    """(canonical up-row tuple, automorphisms of the input as permutation
    tuples); exact, via minimum encoding over color-respecting relabelings."""
    if n == 0:
        return (), [()]
    color = _colors(n, rows)
    blocks = _color_blocks(n, color)
    best = None
    for perm in _slot_perms(n, blocks):
        enc = _apply_perm(n, rows, perm)
        if best is None or enc < best:
            best = enc
    auts = [
        perm
        for perm in _class_bijections(n, blocks)
        if _apply_perm(n, rows, perm) == rows
    ]
    return best, auts


def iter_canonical_posets(n):
    """Yield (Poset, automorphisms) for one representative per isomorphism
    class, in deterministic order."""
    for rows in iter_labeled_up_rows(n):
        canon, auts = canonical_data(n, rows)
        if canon == rows:
            yield Poset(n, rows), auts


def iter_chains(p):
    """All nonempty chains as ascending tuples (unique listing)."""
    out = []

    def rec(chain, last):
        out.append(tuple(chain))
        row = p.up[last]
        b = 0
        while row:
            if row & 1:
                chain.append(b)
                rec(chain, b)
                chain.pop()
            row >>= 1
            b += 1

    for start in range(p.n):
        rec([start], start)
    out.sort(key=lambda ch: (len(ch), ch))
    return out


def chain_orbit_reps(chains, auts):
    """One chain per orbit under the automorphism action."""
    if len(auts) <= 1:
        return list(chains)
    keep = []
    for chain in chains:
        images = [tuple(perm[a] for a in chain) for perm in auts]
        if min(images) == chain:
            keep.append(chain)
    return keep


def random_poset(rng, n, edge_prob=None):
    """Random labeled poset: random topological order plus random forward
    relations, transitively closed."""
    from .poset import build_poset

    if edge_prob is None:
        edge_prob = rng.uniform(0.1, 0.5)
    order = list(range(n))
    rng.shuffle(order)
    relations = []
    for t in range(n):
        for u in range(t + 1, n):
            if rng.random() < edge_prob:
                relations.append((order[t], order[u]))
    return build_poset(n, relations)
