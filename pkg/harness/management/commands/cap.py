"""``cap``: run scenarios and suites, inspect models and bodies."""

import math

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from capacity_lab.choices import ModelKind, Verdict
from comparison.exceptions import ComparisonError
from geometry.exceptions import GeometryError
from geometry.services.convexity import lambda_convexity_check
from geometry.services.descriptors import load_body
from geometry.services.measures import (
    area,
    curvature_summary,
    divergence_volume,
    minkowski_residual,
    volume,
)
from harness.exceptions import HarnessError
from harness.services.csv_export import emit_csv
from harness.services.harness_service import HarnessService
from manifolds.exceptions import ManifoldError
from manifolds.services.descriptors import load_model
from radial.exceptions import RadialCapacityError
from radial.services.capacity import (
    hyperbolicity_indicator,
    inverse_warping_integral,
    radial_comparison,
    warped_ball_capacity,
)
from solver.exceptions import SolverError

EXIT_FAILS = 1
EXIT_USAGE = 2

APP_ERRORS = (GeometryError, ManifoldError, RadialCapacityError, ComparisonError, SolverError, HarnessError)


def _number(value) -> str:
    return "-" if value is None else f"{value:.12g}"


class Command(BaseCommand):
    help = "Capacity estimates and bound checks: run | suite | radial | body"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="subcommand", required=True)

        run = subparsers.add_parser("run", help="Evaluate one scenario file.")
        run.add_argument("scenario", metavar="SCENARIO_FILE")
        self._add_overrides(run)

        suite = subparsers.add_parser("suite", help="Evaluate every scenario file in a directory.")
        suite.add_argument("directory", metavar="DIR")
        suite.add_argument("--workers", type=int, default=None, help="Worker processes (default CAP_WORKERS).")
        self._add_overrides(suite)

        radial = subparsers.add_parser("radial", help="Capacity of a geodesic ball of a warped model.")
        radial.add_argument("model", metavar="MODEL_FILE")
        radial.add_argument("--t0", type=float, required=True, help="Radius of the ball.")
        radial.add_argument("--t1", type=float, default=math.inf, help="Outer radius (default: whole model).")

        body = subparsers.add_parser("body", help="Measures and curvature of a convex body.")
        body.add_argument("body", metavar="BODY_FILE")
        body.add_argument("--info", action="store_true", help="Area, volume, curvatures and lambda-check.")
        body.add_argument("--lam", type=float, default=None, help="Lambda for the convexity check.")
        body.add_argument("--resolution", type=int, default=None, help="Boundary mesh resolution.")

    @staticmethod
    def _add_overrides(parser):
        parser.add_argument("--h", type=float, default=None, help="Grid spacing.")
        parser.add_argument("--outer", type=float, default=None, help="First outer radius of the exhaustion.")
        parser.add_argument("--growth", type=float, default=None, help="Outer radius growth factor.")
        parser.add_argument("--tol", type=float, default=None, help="Exhaustion convergence tolerance.")
        parser.add_argument("--seed", type=int, default=None, help="Seed for randomized suites.")
        parser.add_argument("--csv", default=None, metavar="PATH", help="Write the report table as CSV (relative paths go under CAP_REPORT_DIR).")

    def handle(self, *args, **options):
        handler = getattr(self, f"handle_{options['subcommand']}")
        try:
            return handler(options)
        except APP_ERRORS as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)

    def _service(self, options) -> HarnessService:
        overrides = {key: options.get(key) for key in ("h", "outer", "growth", "tol", "seed")}
        return HarnessService(workers=options.get("workers"), overrides=overrides)

    def _write_reports(self, reports, options):
        self.stdout.write(f"{'id':<32} {'kind':<22} {'capacity':>16} {'bound':>16} {'slack':>12}  verdict")
        for report in reports:
            slack = "-" if report.slack is None else f"{report.slack:+.3e}"
            self.stdout.write(
                f"{report.scenario_id:<32} {report.kind:<22} {_number(report.capacity):>16} "
                f"{_number(report.bound):>16} {slack:>12}  {report.verdict}"
            )
        if options.get("csv") and reports:
            path = emit_csv(reports, options["csv"])
            self.stdout.write(f"CSV -> {path}")

    def handle_run(self, options):
        report = self._service(options).run_file(options["scenario"])
        self._write_reports([report], options)
        if report.verdict == Verdict.FAILS:
            raise CommandError(f"{report.scenario_id}: bound fails", returncode=EXIT_FAILS)

    def handle_suite(self, options):
        suite_run = self._service(options).run_suite(options["directory"])
        reports = list(suite_run.reports.order_by("scenario_id"))
        self._write_reports(reports, options)
        for name, message in sorted(suite_run.errors.items()):
            self.stderr.write(f"error {name}: {message}")
        self.stdout.write(
            f"{suite_run.total} reports: {suite_run.holds} holds, {suite_run.equality} equality, "
            f"{suite_run.fails} fails, {suite_run.inapplicable} inapplicable; {len(suite_run.errors)} errors"
        )
        if suite_run.exit_status:
            raise CommandError(f"Suite finished with status {suite_run.exit_status}", returncode=suite_run.exit_status)

    def handle_radial(self, options):
        model = load_model(options["model"])
        t0, t1 = options["t0"], options["t1"]
        integral = inverse_warping_integral(model, t0, t1)
        self.stdout.write(f"model: {model!r}")
        self.stdout.write(f"integral g^-n from {t0:g} to {t1:g}: {'divergent' if integral.divergent else _number(integral.value)}")
        self.stdout.write(f"capacity: {_number(warped_ball_capacity(model, t0, t1))}")
        if model.kind == ModelKind.CLOSED:
            self.stdout.write(f"hyperbolic: {hyperbolicity_indicator(model)}")
            if math.isinf(t1):
                for report in radial_comparison(model, t0):
                    self.stdout.write(
                        f"{report.context}: bound {_number(float(report.bound_curve[0]))}, "
                        f"slack {report.worst_slack:+.3e}, {report.verdict}"
                    )

    def handle_body(self, options):
        loaded = load_body(options["body"])
        body = loaded.body
        self.stdout.write(f"body: {body.kind} in R^{body.dimension}, bounding radius {body.bounding_radius:.6g}")
        if not options["info"]:
            return
        resolution = options["resolution"] or settings.CAP_MESH_RESOLUTION
        self.stdout.write(f"area: {_number(area(body, resolution))}")
        self.stdout.write(f"volume: {_number(volume(body))}")
        self.stdout.write(f"volume (divergence): {_number(divergence_volume(body, resolution=resolution))}")
        self.stdout.write(f"minkowski residual: {minkowski_residual(body, resolution=resolution):.3e}")
        lam = options["lam"]
        if body.smooth:
            summary = curvature_summary(body, resolution)
            self.stdout.write(
                f"kappa_min: {_number(summary.kappa_min)}  H_min: {_number(summary.mean_min)}  "
                f"H_max: {_number(summary.mean_max)}  (uncertainty {summary.uncertainty:.3e})"
            )
            if lam is None and summary.kappa_min > 0:
                lam = summary.kappa_min
        else:
            self.stdout.write("curvature: boundary has ridges")
        if lam:
            report = lambda_convexity_check(body, lam)
            self.stdout.write(
                f"lambda-convex at {lam:.6g}: {report.holds} (worst margin {report.worst_margin:+.3e}, {report.tested} balls)"
            )
