"""Supporting-ball test for lambda-convexity."""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from geometry.exceptions import GeometryError
from geometry.services.bodies import Ball, ConvexBody
from geometry.services.meshing import boundary_samples

logger = logging.getLogger(__name__)

DEFAULT_CHECK_RESOLUTION = 48
CENTRE_CHUNK = 128


@dataclass(frozen=True)
class LambdaConvexityReport:
    """Outcome of a lambda-convexity check.

    ``worst_margin`` is the smallest ``1/lambda - max_q |q - c|`` over the tested
    supporting balls; negative values measure how far the body sticks out.
    """

    holds: bool
    worst_margin: float
    lam: float
    tested: int
    tolerance: float
    failures: List[int] = field(default_factory=list)


def _ball_report(body: Ball, lam: float, tolerance: float) -> LambdaConvexityReport:
    # Supporting balls of radius 1/lam contain a ball of radius R iff 1/lam >= R.
    margin = 1.0 / lam - body.radius
    return LambdaConvexityReport(
        holds=margin >= -tolerance, worst_margin=margin, lam=lam, tested=1, tolerance=tolerance
    )


def lambda_convexity_check(
    body: ConvexBody,
    lam: float,
    samples: int = 512,
    resolution: int = DEFAULT_CHECK_RESOLUTION,
) -> LambdaConvexityReport:
    """Check that every tested boundary point admits a supporting ball of radius 1/lam.

    For each of ``samples`` boundary points ``p`` with outer normal ``nu`` (a
    supporting normal at non-smooth points) the body must lie in the closed ball
    centred at ``p - nu / lam`` with radius ``1 / lam``. Containment is tested
    against all boundary samples of the mesh at ``resolution``.

    Args:
        body: Body to test.
        lam: Convexity parameter, > 0.
        samples: Number of supporting balls tested.
        resolution: Boundary extraction resolution for the containment test.

    Returns:
        LambdaConvexityReport with holds, worst margin and failing sample indices.

    Raises:
        GeometryError: If ``lam <= 0``.
    """
    if lam <= 0:
        raise GeometryError("Lambda must be positive.")
    tolerance = 1e-6 * max(1.0, body.bounding_radius)
    if isinstance(body, Ball) and body.dimension != 3:
        return _ball_report(body, lam, tolerance)

    sample_set = boundary_samples(body, resolution)
    centres_from = sample_set.subsample(samples)
    radius = 1.0 / lam
    centres = centres_from.points - radius * centres_from.normals
    boundary = sample_set.points

    margins = np.empty(len(centres))
    for start in range(0, len(centres), CENTRE_CHUNK):
        chunk = centres[start:start + CENTRE_CHUNK]
        distances = np.linalg.norm(boundary[None, :, :] - chunk[:, None, :], axis=-1)
        margins[start:start + CENTRE_CHUNK] = radius - distances.max(axis=1)

    worst = float(margins.min())
    failures = np.flatnonzero(margins < -tolerance).tolist()
    holds = not failures
    logger.info(
        "Lambda-convexity check lam=%.6g: %s (worst margin %.3e over %d balls)",
        lam, "holds" if holds else "fails", worst, len(centres),
    )
    return LambdaConvexityReport(
        holds=holds,
        worst_margin=worst,
        lam=lam,
        tested=len(centres),
        tolerance=tolerance,
        failures=failures,
    )
