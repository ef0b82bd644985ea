"""Shared pytest fixtures for the capacity toolkit."""

import math

import numpy as np
import pytest
import yaml

from geometry.services.bodies import Ball, Ellipsoid, lens
from harness.models import SuiteRun
from harness.services.loader import validate_scenario
from manifolds.services.constructions import build_model, remark_example_model
from solver.services.dirichlet import solve_annulus


# ============================================================================
# BODY FIXTURES
# ============================================================================

@pytest.fixture
def unit_ball():
    """Return the closed unit ball centred at the origin of R^3."""
    return Ball((0.0, 0.0, 0.0), 1.0)


@pytest.fixture
def spheroid():
    """Return the prolate spheroid with semi-axes (1, 1, 1.5)."""
    return Ellipsoid((0.0, 0.0, 0.0), (1.0, 1.0, 1.5))


@pytest.fixture
def lens_body():
    """Return the lens: two unit balls centred at (+-0.5, 0, 0)."""
    return lens(separation=1.0, radius=1.0)


@pytest.fixture
def spheroid_area():
    """Closed-form surface area of the (1, 1, 1.5) prolate spheroid."""
    a, c = 1.0, 1.5
    e = math.sqrt(1.0 - a * a / (c * c))
    return 2.0 * math.pi * a * a * (1.0 + c / (a * e) * math.asin(e))


@pytest.fixture
def rng():
    """Seeded random generator for sampled property checks."""
    return np.random.default_rng(12345)


# ============================================================================
# DESCRIPTOR FIXTURES
# ============================================================================

@pytest.fixture
def ball_descriptor_text():
    """Return a YAML descriptor of the unit ball."""
    return "kind: ball\ncenter: [0, 0, 0]\nradius: 1.0\n"


@pytest.fixture
def lens_descriptor_text():
    """Return a YAML descriptor of the lens body."""
    return (
        "kind: intersection\n"
        "components:\n"
        "  - kind: ball\n"
        "    center: [-0.5, 0, 0]\n"
        "    radius: 1.0\n"
        "  - kind: ball\n"
        "    center: [0.5, 0, 0]\n"
        "    radius: 1.0\n"
    )


@pytest.fixture
def spheroid_descriptor_text():
    """Return a YAML descriptor of the (1, 1, 1.5) spheroid."""
    return "kind: ellipsoid\ncenter: [0, 0, 0]\nsemi_axes: [1.0, 1.0, 1.5]\n"


# ============================================================================
# MODEL FIXTURES
# ============================================================================

@pytest.fixture
def euclidean_model():
    """Return flat R^3 as the closed model g(t) = t with n = 2."""
    return build_model("euclidean", 2)


@pytest.fixture
def hyperbolic_model():
    """Return hyperbolic 3-space, g(t) = sinh t with n = 2."""
    return build_model("hyperbolic", 2, {"curvature": -1.0})


@pytest.fixture
def splice_model():
    """Return the spliced model with t0 = 1, H0 = 2 and n = 2."""
    return remark_example_model(1.0, 2.0, n=2)


# ============================================================================
# SOLVER FIXTURES
# ============================================================================

COARSE_H = 0.05


@pytest.fixture(scope="module")
def coarse_ball_potential():
    """Potential of the unit ball in the outer ball of radius 2 on the half-plane, h = 0.05."""
    return solve_annulus(Ball((0.0, 0.0, 0.0), 1.0), 2.0, COARSE_H)


@pytest.fixture(scope="module")
def coarse_wide_ball_potential():
    """Same body and lattice as ``coarse_ball_potential`` with outer radius 4."""
    return solve_annulus(Ball((0.0, 0.0, 0.0), 1.0), 4.0, COARSE_H)


# ============================================================================
# SCENARIO FIXTURES
# ============================================================================

@pytest.fixture
def unit_ball_document():
    """Return the unit ball as an inline body descriptor mapping."""
    return {"kind": "ball", "center": [0.0, 0.0, 0.0], "radius": 1.0}


@pytest.fixture
def make_scenario():
    """Return a factory validating a scenario mapping into a Scenario."""
    def _make(**document):
        return validate_scenario(document)

    return _make


@pytest.fixture
def write_scenario(tmp_path):
    """Return a factory writing a YAML scenario file into a temporary directory."""
    def _write(name, document, directory=None):
        target = (directory or tmp_path) / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(yaml.safe_dump(document, sort_keys=False), encoding="utf-8")
        return target

    return _write


@pytest.fixture
def ball_scenario_document(unit_ball_document):
    """Return a thm-3.1 scenario for the unit ball with H0 = 1."""
    return {"id": "unit-ball", "kind": "thm-3.1", "body": unit_ball_document, "h0": 1.0}


@pytest.fixture
def suite_run(db):
    """Return an empty persisted suite run."""
    return SuiteRun.objects.create(source="scenarios", seed=20240101, workers=1)
