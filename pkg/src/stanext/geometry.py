"""Order-polytope side of the dictionary: axis-aligned face spans of the
slice polytopes, extreme-direction tests, and the mixed-volume identity.

No floating point: faces live in coordinate subspaces plus at most one
diagonal generator, so ranks follow a closed-form rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .criticality import beta_mask, canonical_multiplicity
from .linext import OFFSET, VARIANTS, _count_pinned, iter_extensions
from .poset import PosetError, chain_mask, popcount, validate_config


class NotAFace(PosetError):
    """The requested direction has no closed-form face for this polytope."""


class UnsupportedDirection(PosetError):
    pass


class BadTotal(PosetError):
    pass


def plus_e(j):
    return ("+e", j)


def minus_e(j):
    return ("-e", j)


def e_uv(u, v):
    if u == v:
        raise UnsupportedDirection("e_uv needs distinct coordinates")
    return ("euv", u, v)


@dataclass(frozen=True)
class FaceSpan:
    """Span of a face: coordinate support plus an optional diagonal generator."""

    coords: int
    ouv: tuple | None = None

    @property
    def rank(self):
        extra = 0
        if self.ouv is not None:
            u, v = self.ouv
            if not (self.coords >> u & 1 and self.coords >> v & 1):
                extra = 1
        return popcount(self.coords) + extra


def face_span(p, c, i, d):
    """Span of the face of the i-th slice polytope in direction d.

    Implements the axis case analysis: a coordinate outside the slice leaves
    the whole span; hitting a slice member cuts away its up- or down-set; a
    difference direction on a covering pair keeps the diagonal.
    """
    beta = beta_mask(p, c, i)
    cmask = chain_mask(c)
    kind = d[0]
    if kind in ("+e", "-e"):
        j = d[1]
        if cmask >> j & 1:
            raise UnsupportedDirection("axis directions index non-chain elements")
        if not beta >> j & 1:
            return FaceSpan(beta)
        if kind == "-e":
            return FaceSpan(beta & ~(p.down[j] | (1 << j)))
        return FaceSpan(beta & ~(p.up[j] | (1 << j)))

    _, u, v = d
    if cmask >> u & 1 or cmask >> v & 1:
        raise UnsupportedDirection("difference directions index non-chain elements")
    u_in = bool(beta >> u & 1)
    v_in = bool(beta >> v & 1)
    if not u_in and not v_in:
        return FaceSpan(beta)          # both coordinates frozen on this slice
    if not p.less(u, v):
        raise NotAFace(f"direction {d} needs u < v for a closed-form face")
    if u_in and v_in:
        if p.up[u] & p.down[v] & ~cmask:
            raise NotAFace(f"{v} does not cover {u}; face is lower-dimensional")
        return FaceSpan(beta & ~(1 << u) & ~(1 << v), ouv=(u, v))
    if u_in:
        return FaceSpan(beta & ~(p.up[u] | (1 << u)))
    return FaceSpan(beta & ~(p.down[v] | (1 << v)))


def is_extreme(p, c, d):
    """Rank test from the extremality definition over every sub-collection of
    the canonical body list (support subsets at full multiplicity suffice)."""
    if not validate_config(p, c):
        raise ValueError("invalid chain configuration")
    support = [j for j in range(c.k + 1) if canonical_multiplicity(p, c, j) > 0]
    spans = {}
    for j in support:
        try:
            spans[j] = face_span(p, c, j, d)
        except NotAFace as exc:
            raise UnsupportedDirection(str(exc))
    for bits in range(1, 1 << len(support)):
        coords = 0
        ouv = None
        size = 0
        for t, j in enumerate(support):
            if bits >> t & 1:
                span = spans[j]
                coords |= span.coords
                ouv = ouv or span.ouv
                size += canonical_multiplicity(p, c, j)
        rank = popcount(coords)
        if ouv is not None and not (coords >> ouv[0] & 1 and coords >> ouv[1] & 1):
            rank += 1
        if rank < size:
            return False
    return True


def certified_directions(p, c, maximal_pair=None):
    """Directions certified extreme by the companion-position clauses.

    Returns {direction: sorted clause letters}.  Clauses (e)-(h) are only
    evaluated when a maximal splitting pair is supplied, matching their
    hypotheses.
    """
    if c.ell is None:
        raise ValueError("certified directions need ell")
    n, k, ell = p.n, c.k, c.ell
    cmask = chain_mask(c)
    i_ell = c.positions[ell - 1]

    hits_eq = {}
    adjacent = set()
    window = set()
    for place in iter_extensions(p, c, "equal"):
        inv = [0] * (n + 1)
        for e, pos in enumerate(place):
            inv[pos] = e
        for pos in range(1, n + 1):
            e = inv[pos]
            if not cmask >> e & 1:
                hits_eq.setdefault(e, set()).add(pos)
        for pos in range(1, n):
            a, b = inv[pos], inv[pos + 1]
            if not cmask >> a & 1 and not cmask >> b & 1 and p.less(a, b):
                adjacent.add((a, b))
        a, b = inv[i_ell - 1], inv[i_ell + 1]
        if not cmask >> a & 1 and not cmask >> b & 1 and p.less(a, b):
            window.add((a, b))

    def hits(variant):
        out = {}
        for place in iter_extensions(p, c, variant):
            for e, pos in enumerate(place):
                if not cmask >> e & 1:
                    out.setdefault(e, set()).add(pos)
        return out

    found = {}

    def certify(direction, clause):
        found.setdefault(direction, set()).add(clause)

    for m in range(0, ell + 1):
        above = p.full_mask if m == 0 else p.up[c.chain[m - 1]]
        target = c.position(m, n) + 1
        for j, positions in hits_eq.items():
            if above >> j & 1 and target in positions:
                certify(minus_e(j), "a")
    for m in range(ell, k + 2):
        below = p.full_mask if m == k + 1 else p.down[c.chain[m - 1]]
        target = c.position(m, n) - 1
        for j, positions in hits_eq.items():
            if below >> j & 1 and target in positions:
                certify(plus_e(j), "b")
    for u, v in adjacent:
        certify(e_uv(u, v), "c")
    for u, v in window:
        certify(e_uv(u, v), "d")

    if maximal_pair is not None:
        r_max, s_min = maximal_pair
        for m in range(r_max + 1, ell):
            above = p.full_mask if m == 0 else p.up[c.chain[m - 1]]
            target = c.position(m, n) + 2
            for j, positions in hits_eq.items():
                if above >> j & 1 and target in positions:
                    certify(minus_e(j), "e")
        for m in range(ell + 1, s_min + 1):
            below = p.full_mask if m == k + 1 else p.down[c.chain[m - 1]]
            target = c.position(m, n) - 2
            for j, positions in hits_eq.items():
                if below >> j & 1 and target in positions:
                    certify(plus_e(j), "f")
        above = p.full_mask if ell == 1 else p.up[c.chain[ell - 2]]
        target = c.position(ell - 1, n) + 2
        for j, positions in hits("plus").items():
            if above >> j & 1 and target in positions:
                certify(minus_e(j), "g")
        below = p.full_mask if ell == k else p.down[c.chain[ell]]
        target = c.position(ell + 1, n) - 2
        for j, positions in hits("minus").items():
            if below >> j & 1 and target in positions:
                certify(plus_e(j), "h")

    return {d: sorted(clauses) for d, clauses in found.items()}


@dataclass(frozen=True)
class MixedVolume:
    """Exact mixed volume as extension count over (n-k)!."""

    numerator: int
    denominator: int

    @property
    def value(self):
        return Fraction(self.numerator, self.denominator)


def mixed_volume(p, chain, kappa):
    """Mixed volume of the slice-polytope multiset given by multiplicities.

    kappa[j] copies of the j-th slice; the total must be n-k, which pins the
    chain at the induced positions and turns the volume into a count.
    """
    k = len(chain)
    if len(kappa) != k + 1:
        raise BadTotal(f"need k+1 multiplicities, got {len(kappa)}")
    if any(m < 0 for m in kappa):
        raise BadTotal("negative multiplicity")
    if sum(kappa) != p.n - k:
        raise BadTotal(f"multiplicities sum to {sum(kappa)}, need {p.n - k}")
    for a, b in zip(chain, chain[1:]):
        if not p.less(a, b):
            raise PosetError("chain argument is not a chain")
    pins = {}
    acc = 0
    for m in range(1, k + 1):
        acc += kappa[m - 1]
        pins[m + acc] = chain[m - 1]
    return MixedVolume(_count_pinned(p, pins), factorial(p.n - k))


def family_kappas(p, c):
    """The three multiplicity vectors whose mixed volumes are the three counts."""
    out = {}
    for v in VARIANTS:
        def pos(j, v=v):
            base = c.position(j, p.n)
            if c.ell is not None and j == c.ell:
                base += OFFSET[v]
            return base

        out[v] = tuple(pos(j + 1) - pos(j) - 1 for j in range(c.k + 1))
    return out


def op_vertices(p, members):
    """Vertices of the order polytope on the given elements: indicator vectors
    of the upper sets of the induced subposet (a standard fact; test oracle)."""
    members = sorted(members)
    verts = []
    m = len(members)
    for bits in range(1 << m):
        chosen = {members[t] for t in range(m) if bits >> t & 1}
        ok = True
        for a in chosen:
            for b in members:
                if p.less(a, b) and b not in chosen:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            verts.append(tuple(1 if members[t] in chosen else 0 for t in range(m)))
    return verts


def slice_vertices(p, c, i):
    """Vertices of the i-th slice polytope in the full non-chain coordinate
    space: order-polytope vertices of its slice, translated by the indicator
    of everything above the next chain member (test oracle)."""
    from .criticality import alpha_mask, beta_mask
    from .poset import above_chain_index, iter_mask

    alpha = sorted(iter_mask(alpha_mask(p, c)))
    slice_set = set(iter_mask(beta_mask(p, c, i)))
    raised = above_chain_index(p, c, i + 1)
    verts = []
    members = [e for e in alpha if e in slice_set]
    for chosen in op_vertices(p, members):
        point = []
        for e in alpha:
            if e in slice_set:
                point.append(chosen[members.index(e)])
            else:
                point.append(1 if raised >> e & 1 else 0)
        verts.append(tuple(point))
    return verts


def minkowski_dim_oracle(p, c, support):
    """Geometric route to the collection dimension: exact rank of the vertex
    differences of every polytope in the collection (test oracle)."""
    vectors = []
    for i in support:
        verts = slice_vertices(p, c, i)
        base = verts[0]
        vectors.extend(
            tuple(a - b for a, b in zip(v, base)) for v in verts[1:]
        )
    rank = 0
    basis = []
    for vec in vectors:
        vec = list(vec)
        for piv, bvec in basis:
            if vec[piv]:
                coeff = Fraction(vec[piv], bvec[piv])
                vec = [a - coeff * b for a, b in zip(vec, bvec)]
        piv = next((t for t, a in enumerate(vec) if a), None)
        if piv is not None:
            basis.append((piv, vec))
            rank += 1
    return rank


def op_facet_census(p, members):
    """Facet count of the order polytope by the face rule: minimal elements,
    maximal elements, and covering pairs of the induced subposet."""
    members = sorted(members)
    inside = set(members)
    minimal = maximal = covers_count = 0
    for a in members:
        if not any(p.less(b, a) for b in inside):
            minimal += 1
        if not any(p.less(a, b) for b in inside):
            maximal += 1
        for b in members:
            if p.less(a, b) and not any(
                p.less(a, z) and p.less(z, b) for z in inside
            ):
                covers_count += 1
    return minimal + maximal + covers_count
