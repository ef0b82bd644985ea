"""Django choice classes for the capacity toolkit.

Centralized enumerations shared by the harness models, scenario serializers
and the check strategies, so that scenario kinds, verdicts and provenance tags
are spelled the same way in scenario files, the database and CSV output.
"""

from django.db import models
from django.utils.translation import gettext_lazy as _


class ScenarioKind(models.TextChoices):
    """Enumeration of the checks a scenario can request.

    Each kind maps to one strategy class in ``harness.strategies``.

    Available Choices:
        THM_3_1: Lower bound cap(K) >= (n-1)H0 area(dK) for H0-convex bodies
            or geodesic balls of Cartan-Hadamard models.
        THM_3_5: Upper bound cap(K) <= (n-1)H0 area(dK) under non-negative
            Ricci curvature, H0 bounding the mean curvature from above.
        COR_4_1: Euclidean specialisation of the lower bound.
        COR_4_2: Euclidean specialisation of the upper bound.
        COR_4_3: Lower bound through the volume, cap >= (n^2-1) H0^2 vol(K).
        COR_4_4: Upper bound through the volume, using H_max.
        THM_4_5: Lower bound for non-smooth lambda-convex bodies.
        SZEGO_MEAN_CURVATURE: cap(K) <= integral of the mean curvature (n=2).
        SZEGO_VOLUME: isoperimetric volume lower bound.
        POLYA_SZEGO_RATIO: exploratory cap/sqrt(area) ratio, never gated.
        RADIAL_EQUALITY: warped-model equality check of the spliced model.
        RICCATI_SUITE: randomized comparison-flow property suites.
    """

    THM_3_1 = "thm-3.1", _("Cartan-Hadamard lower bound")
    THM_3_5 = "thm-3.5", _("Non-negative Ricci upper bound")
    COR_4_1 = "cor-4.1", _("Euclidean lower bound")
    COR_4_2 = "cor-4.2", _("Euclidean upper bound")
    COR_4_3 = "cor-4.3", _("Volume lower bound")
    COR_4_4 = "cor-4.4", _("Volume upper bound")
    THM_4_5 = "thm-4.5", _("Lambda-convex lower bound")
    SZEGO_MEAN_CURVATURE = "szego-mean-curvature", _("Mean curvature upper bound")
    SZEGO_VOLUME = "szego-volume", _("Isoperimetric volume bound")
    POLYA_SZEGO_RATIO = "polya-szego-ratio", _("Area ratio (exploratory)")
    RADIAL_EQUALITY = "radial-equality", _("Warped model equality")
    RICCATI_SUITE = "riccati-suite", _("Comparison flow suites")


class Verdict(models.TextChoices):
    """Outcome of a single check.

    The verdict is a pure function of the signed slack, the tolerance and
    whether the hypothesis certificate held; see ``harness.services.verdicts``.
    """

    HOLDS = "holds", _("Holds")
    EQUALITY = "equality", _("Equality within tolerance")
    FAILS = "fails", _("Fails")
    INAPPLICABLE = "inapplicable", _("Inapplicable")


class CapacityMethod(models.TextChoices):
    """How the capacity figure in a report was obtained."""

    CLOSED_FORM = "closed-form", _("Closed form")
    QUADRATURE = "quadrature", _("Quadrature")
    ENERGY = "energy", _("Grid energy")
    FLUX = "flux", _("Grid flux")
    NONE = "none", _("Not computed")


class Provenance(models.TextChoices):
    """Origin tag attached to every number echoed in a report."""

    CLOSED_FORM = "closed-form", _("Closed form")
    QUADRATURE = "quadrature", _("Quadrature")
    GRID = "grid", _("Grid")
    USER = "user", _("User supplied")
    DERIVED = "derived", _("Derived from geometry")


class SolveMode(models.TextChoices):
    """Grid layout of the Dirichlet solve.

    AUTO picks the axisymmetric half-plane whenever the body exposes a
    symmetry axis and falls back to the full 3-D grid otherwise.
    """

    AUTO = "auto", _("Automatic")
    FULL3D = "full3d", _("Full 3-D grid")
    AXISYM = "axisym", _("Axisymmetric half-plane")


class BoundDirection(models.TextChoices):
    """Inequality direction of a bound check."""

    LOWER = "lower", _("Capacity bounded below")
    UPPER = "upper", _("Capacity bounded above")
    NONE = "none", _("No inequality")


class ModelKind(models.TextChoices):
    """Kind of a rotationally symmetric warped model.

    CLOSED models carry a pole at t = 0 (g(0) = 0, g'(0) = 1); EXTERIOR models
    describe the end dK x [0, inf) of a body with fiber volume vol(dK).
    """

    CLOSED = "closed", _("Closed (pole at t = 0)")
    EXTERIOR = "exterior", _("Exterior end")


class ProfileName(models.TextChoices):
    """Named warping profiles accepted in model descriptors."""

    EUCLIDEAN = "euclidean", _("Euclidean g(t) = t")
    HYPERBOLIC = "hyperbolic", _("Hyperbolic g(t) = sinh(kt)/k")
    SPHERICAL = "spherical", _("Spherical g(t) = sin(kt)/k")
    CONCAVE = "concave", _("Concave g(t) = t (1 + t^2)^(-1/4)")
    REMARK_SPLICE = "remark-splice", _("Convex splice with affine tail")
    TABULATED = "tabulated", _("Tabulated (monotone cubic)")
    AFFINE = "affine", _("Affine g(r) = 1 + H0 r")


class CurvatureKind(models.TextChoices):
    """What a curvature profile along a normal geodesic describes."""

    SECTIONAL = "sectional", _("Sectional curvature of the normal plane")
    RICCI = "ricci", _("Ricci curvature in the normal direction")


class SignCertificate(models.TextChoices):
    """Sign of a curvature profile verified on samples."""

    NONPOSITIVE = "nonpositive", _("Nonpositive")
    NONNEGATIVE = "nonnegative", _("Nonnegative")
    NONE = "none", _("No sign")


class FlowStop(models.TextChoices):
    """Why a comparison flow stopped integrating."""

    COMPLETED = "completed", _("Reached r_max")
    BLOW_DOWN = "blow-down", _("Value fell below the blow-down threshold")
    BLOW_UP = "blow-up", _("Value exceeded the blow-up threshold")


class NamedCurvatureProfile(models.TextChoices):
    """Curvature profiles accepted in scenario files."""

    FLAT = "flat", _("Identically zero")
    HYPERBOLIC_CONST = "hyperbolic-const", _("Constant value")
    TABLE = "table", _("Tabulated (monotone cubic)")


class NodeClass(models.IntegerChoices):
    """Classification of a grid node for the Dirichlet solve.

    FLUID and BOUNDARY_ADJACENT nodes carry unknowns; a boundary-adjacent
    node has at least one arm cut short by the body or the outer sphere.
    """

    INSIDE = 0, _("Inside the body")
    FLUID = 1, _("Fluid")
    BOUNDARY_ADJACENT = 2, _("Fluid next to a boundary")
    OUTSIDE = 3, _("Outside the outer sphere")
