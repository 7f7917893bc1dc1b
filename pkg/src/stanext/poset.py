"""Finite posets as bitmask strict-order matrices, plus the pinned-chain configuration.

Elements are dense integer ids 0..n-1.  The relation is kept transitively
closed at all times; rows are Python ints used as bitsets, so comparability
queries are O(1) and closure is O(n^2/w).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class PosetError(Exception):
    pass


class CycleDetected(PosetError):
    pass


class OutOfRange(PosetError):
    pass


class ConfigError(PosetError):
    """A ChainConfig invariant failed; str(exc) names the invariant."""


class ParseError(PosetError):
    def __init__(self, msg, line=None, column=None):
        super().__init__(msg)
        self.line = line
        self.column = column


def _closure_rows(n, rows):
    """Warshall closure of bitmask rows (rows[a] = set of b with a<b)."""
    rows = list(rows)
    for m in range(n):
        bit = 1 << m
        row_m = rows[m]
        for a in range(n):
            if rows[a] & bit:
                rows[a] |= row_m
    return rows


class Poset:
    """Strict partial order on range(n), transitively closed.

    up[a] is the bitmask of elements strictly above a, down[b] the mask of
    elements strictly below b.  Instances are immutable and hashable.
    """

    __slots__ = ("n", "up", "down", "_hash")

    def __init__(self, n, up_rows):
        self.n = n
        self.up = tuple(up_rows)
        down = [0] * n
        for a in range(n):
            row = self.up[a]
            bit = 1 << a
            b = 0
            while row:
                if row & 1:
                    down[b] |= bit
                row >>= 1
                b += 1
        self.down = tuple(down)
        self._hash = hash((n, self.up))

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and self.up == other.up

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Poset(n={self.n}, relations={sorted(self.pairs())})"

    def less(self, a, b):
        """True iff a < b."""
        return bool(self.up[a] >> b & 1)

    def comparable(self, a, b):
        return a != b and bool((self.up[a] | self.down[a]) >> b & 1)

    def pairs(self):
        """All strict relations as (a, b) pairs with a < b in the order."""
        out = []
        for a in range(self.n):
            row = self.up[a]
            b = 0
            while row:
                if row & 1:
                    out.append((a, b))
                row >>= 1
                b += 1
        return out

    @property
    def full_mask(self):
        return (1 << self.n) - 1

    def add_relations(self, pairs):
        """New closed poset with the extra strict relations; rejects cycles."""
        rows = list(self.up)
        for a, b in pairs:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise OutOfRange(f"element id out of range: {(a, b)}")
            rows[a] |= 1 << b
        rows = _closure_rows(self.n, rows)
        for a in range(self.n):
            if rows[a] >> a & 1:
                raise CycleDetected(f"cycle through element {a}")
        return Poset(self.n, rows)

    def restrict(self, members):
        """Induced subposet on the given ids; returns (poset, old->new id map)."""
        members = sorted(members)
        remap = {old: new for new, old in enumerate(members)}
        rows = []
        for old in members:
            row = 0
            for other in members:
                if self.less(old, other):
                    row |= 1 << remap[other]
            rows.append(row)
        return Poset(len(members), rows), remap


def build_poset(n, relations):
    """Transitive closure of the given strict relations on range(n).

    Raises CycleDetected on a directed cycle and OutOfRange on bad ids.
    """
    if n < 0:
        raise OutOfRange(f"negative size {n}")
    rows = [0] * n
    for a, b in relations:
        if not (0 <= a < n and 0 <= b < n):
            raise OutOfRange(f"element id out of range: {(a, b)}")
        if a == b:
            raise CycleDetected(f"self-loop at {a}")
        rows[a] |= 1 << b
    rows = _closure_rows(n, rows)
    for a in range(n):
        if rows[a] >> a & 1:
            raise CycleDetected(f"cycle through element {a}")
    return Poset(n, rows)


@dataclass(frozen=True)
class ChainConfig:
    """The pinned chain x_1<...<x_k, its target positions, and the moving index.

    chain holds element ids, positions the targets i_1<...<i_k, ell the
    1-based index of the distinguished chain element (None when no element
    is allowed to move; all positions are then pinned exactly).  Sentinels
    x_0 and x_{k+1} at positions 0 and n+1 are virtual, never stored.
    """

    chain: tuple = field(default=())
    positions: tuple = field(default=())
    ell: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        object.__setattr__(self, "positions", tuple(self.positions))

    @property
    def k(self):
        return len(self.chain)

    def position(self, j, n):
        """i_j with the sentinel conventions i_0 = 0 and i_{k+1} = n+1."""
        if j == 0:
            return 0
        if j == self.k + 1:
            return n + 1
        return self.positions[j - 1]


def validate_config(p, c, explain=False):
    """Check every ChainConfig invariant of c against p.

    Returns True/False, or (ok, reason) when explain is set.
    """

    def fail(reason):
        return (False, reason) if explain else False

    k = c.k
    if len(c.positions) != k:
        return fail("positions length differs from chain length")
    for x in c.chain:
        if not (0 <= x < p.n):
            return fail(f"chain element {x} out of range")
    if len(set(c.chain)) != k:
        return fail("chain elements repeat")
    for a, b in zip(c.chain, c.chain[1:]):
        if not p.less(a, b):
            return fail(f"chain not increasing: {a} !< {b}")
    for i, i_next in zip(c.positions, c.positions[1:]):
        if not i < i_next:
            return fail("positions not strictly increasing")
    if k and not (1 <= c.positions[0] and c.positions[-1] <= p.n):
        return fail("positions outside [1, n]")
    if c.ell is not None:
        if not (1 <= c.ell <= k):
            return fail(f"ell={c.ell} outside [1, k]")
        lo = c.position(c.ell - 1, p.n)
        mid = c.position(c.ell, p.n)
        hi = c.position(c.ell + 1, p.n)
        if not (lo + 1 < mid < hi - 1):
            return fail(f"window violated: need {lo}+1 < {mid} < {hi}-1")
    return (True, "ok") if explain else True


def chain_mask(c):
    m = 0
    for x in c.chain:
        m |= 1 << x
    return m


def above_chain_index(p, c, j):
    """Bitmask of elements strictly above x_j; j=0 means everything."""
    if j <= 0:
        return p.full_mask
    if j >= c.k + 1:
        return 0
    return p.up[c.chain[j - 1]]


def below_chain_index(p, c, j):
    """Bitmask of elements strictly below x_j; j=k+1 means everything."""
    if j >= c.k + 1:
        return p.full_mask
    if j <= 0:
        return 0
    return p.down[c.chain[j - 1]]


def between_chain(p, c, a_idx, b_idx):
    """Mask of elements strictly between x_{a_idx} and x_{b_idx} (sentinels ok)."""
    return above_chain_index(p, c, a_idx) & below_chain_index(p, c, b_idx)


def between(p, a, b):
    """Element set {z : a < z < b} where a, b are ids or the sentinel strings
    "x0"/"xk+1" (below/above everything)."""
    lo = p.full_mask if a == "x0" else p.up[a]
    hi = p.full_mask if b == "xk+1" else p.down[b]
    return mask_to_set(lo & hi)


def covers(p, a, b):
    """True iff b covers a: a < b with nothing strictly between."""
    return p.less(a, b) and not (p.up[a] & p.down[b])


def mask_to_set(mask):
    out = set()
    b = 0
    while mask:
        if mask & 1:
            out.add(b)
        mask >>= 1
        b += 1
    return frozenset(out)


def set_to_mask(members):
    m = 0
    for b in members:
        m |= 1 << b
    return m


def popcount(mask):
    return bin(mask).count("1")


def iter_mask(mask):
    b = 0
    while mask:
        if mask & 1:
            yield b
        mask >>= 1
        b += 1


# ---------------------------------------------------------------------------
# Instance (poset + config + labels) serialization.


@dataclass(frozen=True)
class Instance:
    """A poset with an optional chain configuration and display labels."""

    poset: Poset
    config: ChainConfig
    labels: tuple = ()

    def label(self, e):
        return self.labels[e] if self.labels else f"e{e}"

    def word(self, extension):
        """Render a placement as the space-free label word at positions 1..n."""
        inv = [None] * self.poset.n
        for e, pos in enumerate(extension):
            inv[pos - 1] = e
        return " ".join(self.label(e) for e in inv)


def instance_to_json(inst):
    doc = {
        "n": inst.poset.n,
        "relations": sorted(inst.poset.pairs()),
        "chain": list(inst.config.chain),
        "positions": list(inst.config.positions),
        "ell": inst.config.ell,
    }
    if inst.labels:
        doc["labels"] = list(inst.labels)
    return doc


def instance_from_json(doc):
    try:
        n = doc["n"]
        relations = [tuple(pair) for pair in doc.get("relations", [])]
        chain = tuple(doc.get("chain", ()))
        positions = tuple(doc.get("positions", ()))
        ell = doc.get("ell")
        labels = tuple(doc.get("labels", ()))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed instance document: {exc}") from exc
    poset = build_poset(n, relations)
    if labels and len(labels) != n:
        raise ParseError("labels length differs from n")
    return Instance(poset, ChainConfig(chain, positions, ell), labels)


def load_instance(path):
    """Read an instance from JSON or the edge-list text format."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc), line=exc.lineno, column=exc.colno) from exc
        return instance_from_json(doc)
    return parse_edge_text(text)


def parse_edge_text(text):
    """Edge-list format: "a < b" lines plus "chain:", "positions:", "ell:" headers.

    Tokens are labels; ids follow first appearance.  An optional "elements:"
    line declares labels up front (needed for isolated elements).
    """
    ids = {}
    relations = []
    chain = []
    positions = []
    ell = None

    def intern(tok):
        if tok not in ids:
            ids[tok] = len(ids)
        return ids[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("elements:"):
            for tok in line[len("elements:"):].split():
                intern(tok)
        elif line.startswith("chain:"):
            chain = [intern(tok) for tok in line[len("chain:"):].split()]
        elif line.startswith("positions:"):
            try:
                positions = [int(tok) for tok in line[len("positions:"):].split()]
            except ValueError as exc:
                raise ParseError(f"bad position: {exc}", line=lineno, column=1) from exc
        elif line.startswith("ell:"):
            try:
                ell = int(line[len("ell:"):].strip())
            except ValueError as exc:
                raise ParseError("bad ell", line=lineno, column=1) from exc
        else:
            parts = line.split("<")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise ParseError(f"expected 'a < b', got {line!r}", line=lineno, column=1)
            relations.append((intern(parts[0].strip()), intern(parts[1].strip())))

    labels = tuple(sorted(ids, key=ids.get))
    poset = build_poset(len(ids), relations)
    return Instance(poset, ChainConfig(tuple(chain), tuple(positions), ell), labels)
