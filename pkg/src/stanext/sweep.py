"""Exhaustive verification harness: enumerate small instances, run every
property suite, and report anomalies.

An anomaly is a violated theorem-implied invariant; on a correct
implementation every sweep is anomaly-free, so any finding flags a bug here,
not new mathematics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .criticality import (
    abar_gap,
    admissible_supports,
    beta_mask,
    canonical_multiplicity,
    collection_dim,
    ell_splitting_pairs,
    holds_at_level,
    maximal_splitting_pair,
    mixed_elements,
    pair_excess,
    sharp_critical_pairs,
    splitting_pairs,
)
from .extremal import equivalence_audit, trivial_witness
from .geometry import certified_directions, family_kappas, is_extreme, mixed_volume
from .linext import (
    VARIANTS,
    _count_pinned,
    _iter_pinned,
    a_sequence,
    companions,
    iter_extensions,
    pinned_positions,
)
from .poset import ChainConfig, Poset, PosetError, chain_mask, popcount
from .posetgen import (
    chain_orbit_reps,
    iter_chains,
    iter_canonical_posets,
    iter_labeled_up_rows,
    random_poset,
)
from .ranges import bounds, chain_index_bounds
from .transforms import closure, verify_split_reduction

ALL_CHECKS = (
    "counts",
    "range",
    "criticality",
    "closure",
    "split",
    "mixing",
    "characterize",
    "geometry",
)

DEFAULT_MAX_N = 7


class CapExceeded(PosetError):
    pass


@dataclass
class SweepSpec:
    n_values: tuple
    k_values: tuple | None = None
    positions: tuple | None = None       # fixed position policy; None = all valid
    ell: int | None = None
    dedup: str = "canonical"             # or "labeled"
    checks: tuple = ALL_CHECKS
    sample: int | None = None            # None = exhaustive
    seed: int = 0
    max_n: int = DEFAULT_MAX_N
    jobs: int = 1
    emit_all: bool = False


@dataclass
class Finding:
    descriptor: dict
    verdicts: dict
    anomalies: list = field(default_factory=list)

    @property
    def anomaly(self):
        return bool(self.anomalies)

    def as_json(self):
        return {
            "instance": self.descriptor,
            "verdicts": self.verdicts,
            "anomalies": self.anomalies,
            "anomaly": self.anomaly,
        }


class _InstanceData:
    """Shared per-instance data: the three filtered families and their tables."""

    def __init__(self, p, c, all_places):
        if c.ell is None:
            raise ValueError("the harness needs a moving chain element")
        self.p = p
        self.c = c
        self.families = {}
        for v in VARIANTS:
            pins = list(pinned_positions(p, c, v).items())
            fam = []
            for place in all_places:
                for pos, x in pins:
                    if place[x] != pos:
                        break
                else:
                    fam.append(place)
            self.families[v] = fam
        self.counts = tuple(len(self.families[v]) for v in VARIANTS)
        self.x_ell = c.chain[c.ell - 1]
        self.cells = None
        self._closure = False

    def closure_result(self):
        """Closure of the instance, or None when all families are empty."""
        if self._closure is False:
            self._closure = closure(self.p, self.c) if sum(self.counts) else None
        return self._closure

    @property
    def is_closed(self):
        res = self.closure_result()
        return res is not None and res.closed == self.p

    def table(self):
        if self.cells is None:
            p, c = self.p, self.c
            cells = {
                (v, a, b): 0 for v in VARIANTS for a in (False, True) for b in (False, True)
            }
            for v in VARIANTS:
                for place in self.families[v]:
                    lo, up = companions(place, c, v)
                    cells[v, p.comparable(lo, self.x_ell), p.comparable(up, self.x_ell)] += 1
            self.cells = cells
        return self.cells


def _iii_supercritical(cells):
    return all(
        cells[v, a, b] == 0
        for v in VARIANTS
        for a, b in ((False, True), (True, False), (True, True))
    )


def _iii_critical(cells):
    if any(cells[v, True, True] for v in VARIANTS):
        return False
    singles = [cells[v, a, b] for v in VARIANTS for a, b in ((False, True), (True, False))]
    pures = [cells[v, False, False] for v in VARIANTS]
    return len(set(singles)) == 1 and len(set(pures)) == 1


def _check_counts(data, fail):
    p, c = data.p, data.c
    minus, equal, plus = data.counts
    for v in VARIANTS:
        dp = _count_pinned(p, pinned_positions(p, c, v))
        if dp != len(data.families[v]):
            fail(f"count/stream disagree for {v}: {dp} != {len(data.families[v])}")
    if equal * equal < minus * plus:
        fail(f"log-concavity violated: {data.counts}")

    witness = trivial_witness(p, c)
    if (witness is None) != (equal > 0):
        fail(f"trivial-extremal iff broken: witness={witness}, equal={equal}")
    if witness is not None:
        r, s = witness
        if not abar_gap(p, c, r + 1, s) > c.position(s, p.n) - c.position(r + 1, p.n) - 1:
            fail("returned witness does not witness")

    cells = data.table()
    for v, total in zip(VARIANTS, data.counts):
        row = sum(cells[v, a, b] for a in (False, True) for b in (False, True))
        if row != total:
            fail(f"decomposition row sum broken for {v}")
    eqs = [
        cells["minus", False, False] == cells["equal", False, False] == cells["plus", False, False],
        cells["minus", False, True] == cells["equal", False, True],
        cells["equal", True, False] == cells["plus", True, False],
        cells["minus", True, False] <= cells["minus", False, True],
        cells["plus", False, True] <= cells["plus", True, False],
    ]
    for t, ok in enumerate(eqs, start=1):
        if not ok:
            fail(f"swap-bijection identity ({t}) broken")

    if c.k == 1:
        seq = a_sequence(p, c.chain[0])
        for i in range(1, p.n - 1):
            if seq[i] ** 2 < seq[i - 1] * seq[i + 1]:
                fail(f"a-sequence not log-concave at {i + 1}: {seq}")
            if seq[i] > 0 and seq[i] ** 2 == seq[i - 1] * seq[i + 1]:
                if not seq[i - 1] == seq[i] == seq[i + 1]:
                    fail(f"flat-extremal shape broken at {i + 1}: {seq}")
        i1 = c.positions[0]
        if (seq[i1 - 2], seq[i1 - 1], seq[i1]) != data.counts:
            fail("a-sequence disagrees with pinned counts")


def _check_range(data, fail):
    p, c = data.p, data.c
    minus, equal, plus = data.counts
    # the exact-window direction of the placement lemma holds for the middle
    # family on closed instances under the full splitting-slack regime (a
    # rigid block elsewhere can occupy formula-feasible slots); the
    # containment direction is universal
    exact_equal = _regime(data) and data.is_closed
    cmask = chain_mask(c)
    for y in range(p.n):
        if cmask >> y & 1:
            continue
        lims = {}
        for v in VARIANTS:
            l, u = bounds(p, c, y, v)
            lims[v] = (l, u)
            fam = data.families[v]
            got = sorted({place[y] for place in fam})
            if fam:
                slots = set(pinned_positions(p, c, v))
                formula = [i for i in range(l, u + 1) if i not in slots]
                if not set(got) <= set(formula):
                    fail(f"attained position escapes the formula window for y={y} {v}")
                if v == "equal" and exact_equal and formula != got:
                    fail(f"range formula/oracle differ for y={y}: {formula} vs {got}")
                if not (l <= got[0] and got[-1] <= u):
                    fail(f"attained extremes escape bounds for y={y} {v}")
        lm, le, lp = lims["minus"][0], lims["equal"][0], lims["plus"][0]
        um, ue, up_ = lims["minus"][1], lims["equal"][1], lims["plus"][1]
        if not (le - 1 <= lm <= le <= lp <= le + 1):
            fail(f"lower-bound chain broken for y={y}: {lm},{le},{lp}")
        if not (ue - 1 <= um <= ue <= up_ <= ue + 1):
            fail(f"upper-bound chain broken for y={y}: {um},{ue},{up_}")
        i_max, i_min = chain_index_bounds(p, c, y)
        if i_max < c.ell and not lm == le == lp:
            fail(f"lower bounds should agree below the mover for y={y}")
        if i_min > c.ell and not um == ue == up_:
            fail(f"upper bounds should agree above the mover for y={y}")


def _check_criticality(data, fail):
    p, c = data.p, data.c
    equal = data.counts[1]
    try:
        levels = {cval: holds_at_level(p, c, cval) for cval in (0, 1, 2)}
    except AssertionError as exc:
        fail(str(exc))
        return
    if equal > 0:
        if not levels[0]:
            fail("nonempty middle family but collection not subcritical")
        if c.k == 1 and all(data.counts):
            if not levels[2]:
                fail("k=1 with all three families nonempty must be supercritical")
        for support in admissible_supports(p, c):
            size = sum(canonical_multiplicity(p, c, j) for j in support)
            excess = collection_dim(p, c, support) - size
            hits = sum(1 for j in support if j in (c.ell - 1, c.ell))
            if hits > excess:
                fail(f"sharp-collection index bound broken at support {support}")
            if excess == 0:
                full = all(
                    abar_gap(p, c, a + 1, b)
                    == c.position(b, p.n) - c.position(a + 1, p.n) - 1
                    for a, b in zip((-1,) + support, support + (c.k + 1,))
                    if a + 1 < b
                )
                if hits or not full:
                    fail(f"sharp-subcritical structure broken at {support}")


def _pair_shape(support, k):
    """(r, s) when the support is exactly a prefix [0..r] plus suffix [s..k]."""
    support = sorted(support)
    if support[0] != 0 and support[-1] != k:
        return None
    jumps = [
        (a, b) for a, b in zip(support, support[1:]) if a + 1 < b
    ]
    if support[0] != 0:
        return (-1, support[0]) if not jumps and support[-1] == k else None
    if support[-1] != k:
        return (support[-1], k + 1) if not jumps else None
    if len(jumps) != 1:
        return None
    return jumps[0][0], jumps[0][1]


def _regime(data):
    """The post-split standing assumptions: equality with a nonempty middle
    family and every splitting-pair gap at least two short of its window."""
    minus, equal, plus = data.counts
    if equal == 0 or equal * equal != minus * plus:
        return False
    p, c = data.p, data.c
    return all(
        abar_gap(p, c, r + 1, s) <= c.position(s, p.n) - c.position(r + 1, p.n) - 2
        for r, s in splitting_pairs(c)
    )


def _check_mixing(data, fail):
    p, c = data.p, data.c
    equal = data.counts[1]

    for pair in ell_splitting_pairs(c):
        r, s = pair
        support = tuple(range(0, r + 1)) + tuple(range(s, c.k + 1))
        beta_s = 0
        for j in support:
            beta_s |= beta_mask(p, c, j)
        interval_total = sum(
            c.position(j + 1, p.n) - c.position(j, p.n) - 1 for j in support
        )
        window_excess = popcount(beta_s) - interval_total
        for v in VARIANTS:
            for place in data.families[v]:
                got = len(mixed_elements(p, c, place, pair, v))
                if got != window_excess:
                    fail(
                        f"mixed-element count {got} != {window_excess} "
                        f"for pair {pair}, variant {v}"
                    )
                    break

    # interval containment: positions strictly inside a slice window belong
    # to that slice, shifted windows likewise away from the mover
    for v in VARIANTS:
        shifted = v != "equal"
        for place in data.families[v]:
            inv = sorted(range(p.n), key=lambda e: place[e])
            for j in range(0, c.k + 1):
                if shifted and j in (c.ell - 1, c.ell):
                    continue
                bmask = beta_mask(p, c, j)
                lo = c.position(j, p.n)
                hi = c.position(j + 1, p.n)
                for pos in range(lo + 1, hi):
                    if not bmask >> inv[pos - 1] & 1:
                        fail(f"slice containment broken at slot {pos}, slice {j}, {v}")
                        break

    gaps_ok = all(
        abar_gap(p, c, r + 1, s) <= c.position(s, p.n) - c.position(r + 1, p.n) - 2
        for r, s in splitting_pairs(c)
    )
    if equal > 0 and gaps_ok:
        for j in range(0, c.k + 1):
            if not c.position(j, p.n) + 1 < c.position(j + 1, p.n):
                fail(f"window slack broken at consecutive index {j}")
        for pair in splitting_pairs(c):
            for place in data.families["equal"]:
                if not mixed_elements(p, c, place, pair, "equal"):
                    fail(f"no mixed element for pair {pair} in the middle family")
                    break
        # sharp level-1 collections must be exactly the full pair supports
        # with the two-short gap
        for support in admissible_supports(p, c):
            size = sum(canonical_multiplicity(p, c, j) for j in support)
            if collection_dim(p, c, support) - size != 1:
                continue
            shape = _pair_shape(support, c.k)
            if shape is None:
                fail(f"sharp level-1 support {support} is not pair-shaped")
                continue
            r, s = shape
            if not (r + 1 < c.ell < s):
                fail(f"sharp support {support} does not straddle the mover")
            gap = abar_gap(p, c, r + 1, s)
            if gap != c.position(s, p.n) - c.position(r + 1, p.n) - 2:
                fail(f"sharp pair {shape} misses the two-short gap")

    if _regime(data):
        for pair in ell_splitting_pairs(c):
            excess = pair_excess(p, c, pair)
            if excess is not None and excess < 1:
                fail(f"pair {pair} below critical excess under the regime")
        sharp = sharp_critical_pairs(p, c)
        maximal = maximal_splitting_pair(p, c)
        if sharp:
            if maximal not in sharp:
                fail(f"componentwise maximal pair {maximal} is not itself sharp")
            r_max, s_min = maximal
            if not all(r <= r_max and s >= s_min for r, s in sharp):
                fail("a sharp pair escapes the maximal pair")
            middle = [j for j in range(r_max + 1, s_min)]
            base = tuple(range(0, r_max + 1)) + tuple(range(s_min, c.k + 1))
            for bits in range(1, 1 << len(middle)):
                extra = [middle[t] for t in range(len(middle)) if bits >> t & 1]
                support = tuple(sorted(base + tuple(extra)))
                size = sum(
                    c.position(j + 1, p.n) - c.position(j, p.n) - 1
                    - (1 if j in (c.ell - 1, c.ell) else 0)
                    for j in support
                )
                if collection_dim(p, c, support) - size < 2:
                    fail(f"collection beyond the maximal pair is not supercritical: {support}")
            for v in VARIANTS:
                for place in data.families[v]:
                    if len(mixed_elements(p, c, place, maximal, v)) != 1:
                        fail("maximal pair lost mixed-element uniqueness")
                        break


def _check_closure(data, fail):
    p, c = data.p, data.c
    res = data.closure_result()
    if res is None:
        return
    closed = res.closed
    for a, b in p.pairs():
        if not closed.less(a, b):
            fail("closure dropped a relation")
    # families must be untouched, checked by refiltering under the new relations
    for v in VARIANTS:
        for place in data.families[v]:
            for a, b in res.added_relations:
                if place[a] > place[b]:
                    fail(f"closure broke family {v}")
                    break
    for v in VARIANTS:
        fresh = list(iter_extensions(closed, c, v))
        if fresh != data.families[v]:
            fail(f"family {v} changed across closure")
    again = closure(closed, c)
    if again.added_relations:
        fail(f"closure not idempotent: {again.added_relations}")

    cells_raw = data.table()
    cells_cl = {
        (v, a, b): 0 for v in VARIANTS for a in (False, True) for b in (False, True)
    }
    for v in VARIANTS:
        for place in data.families[v]:
            lo, up = companions(place, c, v)
            cells_cl[v, closed.comparable(lo, data.x_ell), closed.comparable(up, data.x_ell)] += 1
    if _iii_supercritical(cells_cl) and not _iii_supercritical(cells_raw):
        fail("supercritical clause does not transfer down from the closure")
    if _iii_critical(cells_cl) and not _iii_critical(cells_raw):
        fail("critical clause does not transfer down from the closure")


def _check_split(data, fail):
    p, c = data.p, data.c
    for pair in splitting_pairs(c):
        r, s = pair
        if c.ell in (r + 1, s):
            continue
        gap = abar_gap(p, c, r + 1, s)
        window = c.position(s, p.n) - c.position(r + 1, p.n) - 1
        if gap != window:
            continue
        report = verify_split_reduction(p, c, pair)
        if not report["ok"]:
            fail(f"split bookkeeping failed for rigid pair {pair}: {report}")


def _check_characterize(data, fail):
    from .criticality import DegenerateInstance

    p, c = data.p, data.c
    if data.counts[1] == 0:
        return
    try:
        audit = equivalence_audit(p, c, auto_closure=True)
    except DegenerateInstance:
        fail("characterization refused a nonempty instance")
        return
    for name, ok in audit["checks"].items():
        if name != "ok" and not ok:
            fail(f"characterization implication broken: {name}")
    raw = equivalence_audit(p, c, auto_closure=False)
    for name, ok in raw["checks"].items():
        if name != "ok" and not ok:
            fail(f"raw characterization implication broken: {name}")
    data.audit = audit


def _check_geometry(data, fail):
    p, c = data.p, data.c
    kappas = family_kappas(p, c)
    for v, total in zip(VARIANTS, data.counts):
        mv = mixed_volume(p, c.chain, kappas[v])
        if mv.numerator != total:
            fail(f"mixed-volume identity broken for {v}: {mv.numerator} != {total}")
        positive = mv.numerator > 0
        support = [j for j in range(c.k + 1) if kappas[v][j] > 0]
        dim_ok = True
        for bits in range(1, 1 << len(support)):
            sub = [support[t] for t in range(len(support)) if bits >> t & 1]
            size = sum(kappas[v][j] for j in sub)
            if collection_dim(p, c, sub) < size:
                dim_ok = False
                break
        if positive != dim_ok:
            fail(f"positivity/dimension equivalence broken for {v}")

    # direction-certificate soundness holds on the post-split standing
    # assumptions (equality, gap slack, critical collection); outside them
    # a certificate can name a genuinely non-extreme direction
    if _regime(data) and holds_at_level(p, c, 1):
        maximal = maximal_splitting_pair(p, c)
        dirs = certified_directions(p, c, maximal_pair=maximal)
        data.certified = len(dirs)
        for direction, clauses in dirs.items():
            if not is_extreme(p, c, direction):
                fail(f"certified direction {direction} fails the rank test ({clauses})")


_SUITES = {
    "counts": _check_counts,
    "range": _check_range,
    "criticality": _check_criticality,
    "closure": _check_closure,
    "split": _check_split,
    "mixing": _check_mixing,
    "characterize": _check_characterize,
    "geometry": _check_geometry,
}


def run_suites(p, c, all_places, checks=ALL_CHECKS):
    """Run the selected suites on one instance; returns a Finding."""
    data = _InstanceData(p, c, all_places)
    anomalies = []

    def make_fail(suite):
        def fail(msg):
            anomalies.append(f"{suite}: {msg}")

        return fail

    for name in checks:
        _SUITES[name](data, make_fail(name))

    verdicts = {
        "counts": dict(zip(VARIANTS, data.counts)),
        "equality": data.counts[1] > 0
        and data.counts[1] ** 2 == data.counts[0] * data.counts[2],
    }
    certified = getattr(data, "certified", None)
    if certified is not None:
        verdicts["certified_directions"] = certified
    audit = getattr(data, "audit", None)
    if audit is not None:
        report = audit["report"]
        verdicts.update(
            {
                "class": report.criticality,
                "balance": report.balance,
                "supercritical_iii": report.supercritical_iii,
                "critical_iii": report.critical_iii,
                "sharp_witness": bool(
                    report.equality and report.critical_iii and not report.supercritical_iii
                ),
            }
        )
    descriptor = {
        "n": p.n,
        "relations": sorted(p.pairs()),
        "chain": list(c.chain),
        "positions": list(c.positions),
        "ell": c.ell,
    }
    return Finding(descriptor, verdicts, anomalies)


def iter_configs(n, k):
    """All strictly increasing position vectors with a valid moving index."""
    for positions in combinations(range(1, n + 1), k):
        for ell in range(1, k + 1):
            lo = positions[ell - 2] if ell >= 2 else 0
            hi = positions[ell] if ell < k else n + 1
            if lo + 1 < positions[ell - 1] < hi - 1:
                yield positions, ell


def _poset_tasks(spec, n):
    if spec.dedup == "canonical":
        yield from iter_canonical_posets(n)
    else:
        for rows in iter_labeled_up_rows(n):
            yield Poset(n, rows), [tuple(range(n))]


def _instances_for_poset(spec, p, auts):
    all_places = list(_iter_pinned(p, {}))
    chains = chain_orbit_reps(iter_chains(p), auts)
    for chain in chains:
        k = len(chain)
        if spec.k_values is not None and k not in spec.k_values:
            continue
        for positions, ell in iter_configs(p.n, k):
            if spec.positions is not None and positions != spec.positions:
                continue
            if spec.ell is not None and ell != spec.ell:
                continue
            c = ChainConfig(chain, positions, ell)
            yield p, c, all_places


def _sweep_exhaustive(spec):
    for n in spec.n_values:
        if n > spec.max_n:
            raise CapExceeded(f"n={n} beyond the cap {spec.max_n}")
        for p, auts in _poset_tasks(spec, n):
            yield from _instances_for_poset(spec, p, auts)


def _sweep_sampled(spec):
    rng = random.Random(spec.seed)
    produced = 0
    while produced < spec.sample:
        n = rng.choice(spec.n_values)
        if n > spec.max_n:
            raise CapExceeded(f"n={n} beyond the cap {spec.max_n}")
        p = random_poset(rng, n)
        chains = iter_chains(p)
        if spec.k_values is not None:
            chains = [ch for ch in chains if len(ch) in spec.k_values]
        if not chains:
            continue
        chain = rng.choice(chains)
        configs = list(iter_configs(n, len(chain)))
        if not configs:
            continue
        positions, ell = rng.choice(configs)
        yield p, ChainConfig(chain, positions, ell), list(_iter_pinned(p, {}))
        produced += 1


def sweep(spec):
    """Run the sweep; yields Finding objects in a deterministic order."""
    tasks = _sweep_sampled(spec) if spec.sample is not None else _sweep_exhaustive(spec)
    if spec.jobs <= 1:
        for p, c, places in tasks:
            yield run_suites(p, c, places, spec.checks)
        return
    import multiprocessing as mp

    with mp.Pool(spec.jobs) as pool:
        for finding in pool.imap(
            _run_task, ((p, c, places, spec.checks) for p, c, places in tasks), chunksize=64
        ):
            yield finding


def _run_task(args):
    p, c, places, checks = args
    return run_suites(p, c, places, checks)


def summarize(findings):
    """Aggregate a finding stream into the final summary object."""
    summary = {
        "instances": 0,
        "anomalies": 0,
        "equality_instances": 0,
        "sharp_witnesses": 0,
        "by_class": {},
        "by_nk": {},
    }
    for f in findings:
        summary["instances"] += 1
        if f.anomaly:
            summary["anomalies"] += 1
        if f.verdicts.get("equality"):
            summary["equality_instances"] += 1
        if f.verdicts.get("sharp_witness"):
            summary["sharp_witnesses"] += 1
        cls = f.verdicts.get("class")
        if cls:
            summary["by_class"][cls] = summary["by_class"].get(cls, 0) + 1
        key = f"n={f.descriptor['n']},k={len(f.descriptor['chain'])}"
        summary["by_nk"][key] = summary["by_nk"].get(key, 0) + 1
    return summary
