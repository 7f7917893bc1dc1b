import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from stanext import ChainConfig, build_poset
from stanext.poset import Instance

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sharp_instance():
    """The 7-element instance whose extremals need one comparable companion."""
    p = build_poset(7, [(4, 5), (5, 6), (0, 5), (5, 1), (4, 2), (2, 6)])
    c = ChainConfig((4, 5, 6), (2, 4, 6), 2)
    return Instance(p, c, ("y1", "y2", "y3", "y4", "x1", "x2", "x3"))


@pytest.fixture(scope="session")
def closure_instance():
    """The 5-element instance whose closure gains two relations."""
    p = build_poset(5, [(3, 4), (0, 3)])
    c = ChainConfig((3, 4), (2, 4), 2)
    return Instance(p, c, ("y1", "y2", "y3", "x1", "x2"))


@pytest.fixture(scope="session")
def small_instances():
    """Every instance on up to 4 elements (one poset per isomorphism class)."""
    from stanext.posetgen import chain_orbit_reps, iter_canonical_posets, iter_chains
    from stanext.sweep import iter_configs

    out = []
    for n in range(1, 5):
        for p, auts in iter_canonical_posets(n):
            for chain in chain_orbit_reps(iter_chains(p), auts):
                for positions, ell in iter_configs(n, len(chain)):
                    out.append((p, ChainConfig(chain, positions, ell)))
    return out
