"""Acceptance battery: every criterion runs at its stated tolerance and
prints one pass/fail line (repeated in the terminal summary)."""

import os
import time

import pytest

import conftest

from conftest import FIXTURES
from stanext import VARIANTS, iter_extensions
from stanext.linext import _iter_pinned
from stanext.poset import load_instance
from stanext.report import full_report
from stanext.sweep import SweepSpec, run_suites, summarize, sweep

from test_linext import SHARP_WORDS

SAMPLE_N7 = 3000
SAMPLE_SEED = 20240831


def _report(name, ok, detail=""):
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def exhaustive():
    """One full sweep over every instance with at most six elements."""
    t0 = time.time()
    findings = list(sweep(SweepSpec(n_values=(1, 2, 3, 4, 5, 6), dedup="canonical")))
    return findings, time.time() - t0


@pytest.fixture(scope="module")
def sampled_n7(sharp_instance):
    """Seeded random instances on seven elements plus the sharp fixture."""
    t0 = time.time()
    findings = list(
        sweep(SweepSpec(n_values=(7,), sample=SAMPLE_N7, seed=SAMPLE_SEED))
    )
    p, c = sharp_instance.poset, sharp_instance.config
    findings.append(run_suites(p, c, list(_iter_pinned(p, {}))))
    return findings, time.time() - t0


def test_criterion_1_sharp_example_reproduction():
    t0 = time.time()
    inst = load_instance(os.path.join(FIXTURES, "example_crit.json"))
    doc = full_report(inst)
    words = {
        v: {inst.word(place) for place in iter_extensions(inst.poset, inst.config, v)}
        for v in VARIANTS
    }
    elapsed = time.time() - t0
    ok = (
        doc["counts"] == {"minus": 4, "equal": 4, "plus": 4}
        and doc["relation"] == "equality"
        and doc["characterization"]["supercritical_iii"] is False
        and doc["characterization"]["critical_iii"] is True
        and words == SHARP_WORDS
        and elapsed < 1.0
    )
    _report(
        "1 (sharp example)",
        ok,
        f"counts={tuple(doc['counts'].values())}, 12 words verbatim, {elapsed:.2f}s",
    )


def test_criterion_2_closure_example_reproduction():
    t0 = time.time()
    inst = load_instance(os.path.join(FIXTURES, "example_closure.json"))
    doc = full_report(inst)
    p, c = inst.poset, inst.config
    words = {
        v: {inst.word(place) for place in iter_extensions(p, c, v)} for v in VARIANTS
    }
    expected_words = {
        "minus": {"y1 x1 x2 y2 y3", "y1 x1 x2 y3 y2"},
        "equal": {"y1 x1 y2 x2 y3", "y1 x1 y3 x2 y2"},
        "plus": {"y1 x1 y2 y3 x2", "y1 x1 y3 y2 x2"},
    }
    added = {tuple(pair) for pair in doc["characterization"]["added_relations"]}
    # exactly x1<y2 and x1<y3 modulo transitive consequences
    delta_ok = p.add_relations([(3, 1), (3, 2)]).pairs() == sorted(
        set(p.pairs()) | added
    )
    elapsed = time.time() - t0
    ok = (
        doc["counts"] == {"minus": 2, "equal": 2, "plus": 2}
        and {(3, 1), (3, 2)} <= added
        and delta_ok
        and words == expected_words
        and elapsed < 1.0
    )
    _report(
        "2 (closure example)",
        ok,
        f"added={sorted(added)}, six words verbatim, {elapsed:.2f}s",
    )


def test_criterion_3_exhaustive_suite(exhaustive):
    findings, elapsed = exhaustive
    summary = summarize(findings)
    anomalies = [f for f in findings if f.anomaly]
    for f in anomalies[:3]:
        print("ANOMALY", f.descriptor, f.anomalies)
    ok = summary["anomalies"] == 0 and elapsed < 600
    _report(
        "3 (exhaustive n<=6)",
        ok,
        f"{summary['instances']} instances, {summary['anomalies']} anomalies, "
        f"{elapsed:.0f}s single-worker (target: 10 min on 8 workers)",
    )


def test_criterion_4_small_k_supercritical_conclusion(exhaustive):
    findings, _ = exhaustive
    exceptions = [
        f
        for f in findings
        if len(f.descriptor["chain"]) <= 2
        and f.verdicts.get("equality")
        and not f.verdicts.get("supercritical_iii")
    ]
    checked = sum(
        1
        for f in findings
        if len(f.descriptor["chain"]) <= 2 and f.verdicts.get("equality")
    )
    _report(
        "4 (k<=2 supercritical conclusion)",
        not exceptions and checked > 0,
        f"{checked} equality instances at k<=2, {len(exceptions)} exceptions",
    )


def test_criterion_5_sharpness_witness(sampled_n7):
    findings, elapsed = sampled_n7
    witnesses = [f for f in findings if f.verdicts.get("sharp_witness")]
    anomalies = sum(1 for f in findings if f.anomaly)
    ok = witnesses and anomalies == 0
    _report(
        "5 (sharpness witness at n=7)",
        bool(ok),
        f"{len(findings)} instances ({SAMPLE_N7} sampled + fixture), "
        f"{len(witnesses)} witnesses, {anomalies} anomalies, {elapsed:.0f}s",
    )


def test_criterion_6_direction_certificates(exhaustive, sampled_n7):
    all_findings = exhaustive[0] + sampled_n7[0]
    failures = [
        a
        for f in all_findings
        for a in f.anomalies
        if "certified direction" in a
    ]
    verified = sum(f.verdicts.get("certified_directions", 0) for f in all_findings)
    gated = sum(1 for f in all_findings if "certified_directions" in f.verdicts)
    _report(
        "6 (direction certificates)",
        not failures and verified > 0,
        f"{verified} certificates verified on {gated} in-regime instances, "
        f"{len(failures)} failures",
    )
