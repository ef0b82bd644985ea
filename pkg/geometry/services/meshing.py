"""Boundary quadrature samples from a cell-crossing triangulation of the sdf zero level."""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np
from skimage import measure

from geometry.exceptions import GeometryError, MeshingError
from geometry.services.bodies import ConvexBody
from geometry.services.projection import snap_to_boundary, supporting_normals

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 8
LOW_ACCURACY_RESOLUTION = 16
PADDING_CELLS = 2
MIN_PROJECTED_COSINE = 0.5


@dataclass(frozen=True)
class SurfaceSample:
    """One boundary quadrature node."""

    point: np.ndarray
    normal: np.ndarray
    weight: float
    curvatures: Optional[List[float]] = None

    @property
    def mean_curvature(self) -> Optional[float]:
        if self.curvatures is None:
            return None
        return float(np.mean(self.curvatures))


@dataclass(frozen=True)
class SampleSet:
    """Vectorized boundary samples: points, outer normals and area weights.

    Iterating yields ``SurfaceSample`` objects. ``low_accuracy`` is set when
    the extraction ran below the recommended resolution.
    """

    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    resolution: int
    spacing: float
    low_accuracy: bool = False
    curvatures: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[SurfaceSample]:
        for index in range(len(self.weights)):
            curvatures = None if self.curvatures is None else self.curvatures[index].tolist()
            yield SurfaceSample(
                point=self.points[index],
                normal=self.normals[index],
                weight=float(self.weights[index]),
                curvatures=curvatures,
            )

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def with_curvatures(self, curvatures: np.ndarray) -> "SampleSet":
        return SampleSet(
            points=self.points,
            normals=self.normals,
            weights=self.weights,
            resolution=self.resolution,
            spacing=self.spacing,
            low_accuracy=self.low_accuracy,
            curvatures=np.asarray(curvatures, dtype=float),
        )

    def subsample(self, count: int) -> "SampleSet":
        """Evenly spaced subset of ``count`` samples (weights rescaled to keep the total)."""
        if count >= len(self):
            return self
        index = np.unique(np.linspace(0, len(self) - 1, count).round().astype(int))
        scale = self.total_weight / float(np.sum(self.weights[index]))
        return SampleSet(
            points=self.points[index],
            normals=self.normals[index],
            weights=self.weights[index] * scale,
            resolution=self.resolution,
            spacing=self.spacing,
            low_accuracy=self.low_accuracy,
            curvatures=None if self.curvatures is None else self.curvatures[index],
        )


def sample_grid(body: ConvexBody, resolution: int, padding: int = PADDING_CELLS):
    """Cell-vertex grid covering the body's bounding box.

    Returns:
        Tuple of (origin, spacing, axes) where ``axes`` are the 1-D coordinate arrays.
    """
    lower, upper = body.bounding_box()
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        radius = body.bounding_radius
        lower = np.maximum(lower, -radius) if np.all(np.isfinite(lower)) else np.full(3, -radius)
        upper = np.minimum(upper, radius) if np.all(np.isfinite(upper)) else np.full(3, radius)
    extent = float(np.max(upper - lower))
    if extent <= 0:
        raise MeshingError("Body has an empty bounding box; no surface to extract.")
    spacing = extent / resolution
    origin = lower - padding * spacing
    counts = np.ceil((upper - lower) / spacing).astype(int) + 2 * padding + 1
    axes = [origin[i] + spacing * np.arange(counts[i]) for i in range(3)]
    return origin, spacing, axes


def narrow_band_values(body: ConvexBody, points: np.ndarray, band: float) -> np.ndarray:
    """Level values with exact sdf inside the band ``|level| < band``."""
    values = np.array(body.level(points), dtype=float)
    near = np.abs(values) < band
    if np.any(near):
        values[near] = body.sdf(points[near])
    return values


def boundary_samples(body: ConvexBody, resolution: int) -> SampleSet:
    """Quadrature samples on the boundary of a three-dimensional body.

    Marching cubes extracts the zero level on a padded grid with ``resolution``
    cells across the largest box extent. Vertices are snapped onto the boundary,
    each facet becomes one sample at its projected centroid, weighted by its area
    divided by the cosine between facet normal and surface normal.

    Args:
        body: Body in R^3.
        resolution: Cells across the largest extent; at least 8.

    Returns:
        SampleSet with outward normals and positive weights.

    Raises:
        MeshingError: If the resolution is below 8, the body is not
            three-dimensional, or no surface is found.
    """
    if body.dimension != 3:
        raise MeshingError("Boundary extraction is available in R^3 only.")
    if resolution < MIN_RESOLUTION:
        raise MeshingError(f"Resolution {resolution} is below the minimum of {MIN_RESOLUTION}.")
    low_accuracy = resolution < LOW_ACCURACY_RESOLUTION
    if low_accuracy:
        logger.warning("Boundary extraction at resolution %d is low accuracy", resolution)

    origin, spacing, axes = sample_grid(body, resolution)
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    values = narrow_band_values(body, grid, 2.0 * spacing)

    try:
        vertices, faces, _, _ = measure.marching_cubes(
            values, level=0.0, spacing=(spacing, spacing, spacing)
        )
    except (ValueError, RuntimeError) as e:
        raise MeshingError(f"Boundary extraction found no surface: {str(e)}")
    if len(faces) == 0:
        raise MeshingError("Boundary extraction found no surface.")

    vertices = snap_to_boundary(body, vertices + origin)
    a, b, c = (vertices[faces[:, k]] for k in range(3))
    cross = np.cross(b - a, c - a)
    doubled = np.linalg.norm(cross, axis=-1)
    keep = doubled > 1e-14 * spacing * spacing
    a, b, c, cross, doubled = a[keep], b[keep], c[keep], cross[keep], doubled[keep]
    areas = 0.5 * doubled
    facet_normals = cross / doubled[:, None]

    try:
        points = snap_to_boundary(body, (a + b + c) / 3.0)
        normals = supporting_normals(body, points)
    except GeometryError:
        raise
    except Exception as e:
        raise MeshingError(f"Boundary sample construction failed: {str(e)}")

    cosine = np.abs(np.sum(facet_normals * normals, axis=-1))
    weights = areas / np.maximum(cosine, MIN_PROJECTED_COSINE)

    logger.debug(
        "Extracted %d boundary samples at resolution %d (spacing %.4g)", len(weights), resolution, spacing
    )
    return SampleSet(
        points=points,
        normals=normals,
        weights=weights,
        resolution=resolution,
        spacing=spacing,
        low_accuracy=low_accuracy,
    )
