import math

from django.core.exceptions import ValidationError
from django.db import models

from capacity_lab.choices import CapacityMethod, ScenarioKind, Verdict
from capacity_lab.models import TimestampedModel, ValidatedModel
from capacity_lab.validators import (
    validate_finite_float,
    validate_non_negative_float,
    validate_positive_float,
    validate_positive_integer,
    validate_scenario_identifier,
)
from harness.services.verdicts import classify_slack, signed_slack


class SuiteRun(TimestampedModel, ValidatedModel):
    """One ``cap suite`` invocation over a directory of scenario files."""

    source = models.CharField(
        max_length=500,
        help_text="Scenario directory the suite was read from.",
    )
    seed = models.BigIntegerField(
        help_text="Seed passed to randomized checks.",
    )
    workers = models.PositiveIntegerField(
        default=1,
        help_text="Number of worker processes used.",
    )
    holds = models.PositiveIntegerField(default=0, help_text="Reports with verdict 'holds'.")
    equality = models.PositiveIntegerField(default=0, help_text="Reports with verdict 'equality'.")
    fails = models.PositiveIntegerField(default=0, help_text="Reports with verdict 'fails'.")
    inapplicable = models.PositiveIntegerField(default=0, help_text="Reports with verdict 'inapplicable'.")
    errors = models.JSONField(
        default=dict,
        blank=True,
        help_text="Scenario files that failed to parse or evaluate, mapped to their error messages.",
    )
    runtime_seconds = models.FloatField(
        default=0.0,
        help_text="Wall-clock time of the whole suite in seconds.",
    )

    class Meta:
        ordering = ("-created_at",)
        indexes = [
            models.Index(fields=["-created_at"]),
        ]

    def __str__(self) -> str:
        return f"Suite {self.source} ({self.fails} fails of {self.total})"

    @property
    def total(self) -> int:
        return self.holds + self.equality + self.fails + self.inapplicable

    @property
    def exit_status(self) -> int:
        """1 if any report fails, else 2 if any scenario failed to parse or evaluate, else 0."""
        if self.fails:
            return 1
        return 2 if self.errors else 0

    def clean(self) -> None:
        super().clean()
        errors: dict[str, list[str]] = {}

        error = validate_positive_integer(self.workers, "Workers")
        if error:
            errors.setdefault("workers", []).append(error)

        error = validate_non_negative_float(self.runtime_seconds, "Runtime")
        if error:
            errors.setdefault("runtime_seconds", []).append(error)

        if errors:
            raise ValidationError(errors)


class ReportManager(models.Manager):
    def get_queryset(self):
        return super().get_queryset().select_related('suite_run')


class Report(TimestampedModel, ValidatedModel):
    """Outcome of one scenario: computed capacity, bound, slack and verdict."""

    objects = ReportManager()

    suite_run = models.ForeignKey(
        SuiteRun,
        on_delete=models.CASCADE,
        null=True,
        blank=True,
        related_name="reports",
        help_text="Suite this report belongs to; empty for single runs.",
    )
    scenario_id = models.CharField(
        max_length=100,
        help_text="Identifier from the scenario file.",
    )
    kind = models.CharField(
        max_length=30,
        choices=ScenarioKind.choices,
        help_text="Check requested by the scenario.",
    )
    inputs = models.JSONField(
        default=dict,
        help_text="Scenario document echoed verbatim after validation.",
    )
    capacity = models.FloatField(
        null=True,
        blank=True,
        help_text="Computed capacity; empty for flow suites.",
    )
    method = models.CharField(
        max_length=20,
        choices=CapacityMethod.choices,
        default=CapacityMethod.NONE,
        help_text="How the capacity was obtained.",
    )
    error_indicator = models.FloatField(
        default=0.0,
        help_text="Relative error indicator of the capacity.",
    )
    bound = models.FloatField(
        null=True,
        blank=True,
        help_text="Value of the bound the capacity is compared with.",
    )
    slack = models.FloatField(
        null=True,
        blank=True,
        help_text="Signed slack; positive means the bound holds.",
    )
    tolerance = models.FloatField(
        default=0.0,
        help_text="Band around zero slack declared as equality.",
    )
    verdict = models.CharField(
        max_length=20,
        choices=Verdict.choices,
        help_text="Outcome of the check.",
    )
    h = models.FloatField(
        null=True,
        blank=True,
        help_text="Finest grid spacing used, if a grid solve was involved.",
    )
    runtime_seconds = models.FloatField(
        default=0.0,
        help_text="Wall-clock time of the scenario in seconds.",
    )
    provenance = models.JSONField(
        default=dict,
        blank=True,
        help_text="Origin tag (closed-form, quadrature, grid, user, derived) of every reported number.",
    )
    details = models.JSONField(
        default=dict,
        blank=True,
        help_text="Diagnostics: curvature derivation, certificates, traces.",
    )

    class Meta:
        ordering = ("scenario_id",)
        indexes = [
            models.Index(fields=["scenario_id"]),
            models.Index(fields=["kind", "verdict"]),
        ]

    def __str__(self) -> str:
        return f"{self.scenario_id} [{self.kind}]: {self.get_verdict_display()}"

    def clean(self) -> None:
        super().clean()
        errors: dict[str, list[str]] = {}

        error = validate_scenario_identifier(self.scenario_id)
        if error:
            errors.setdefault("scenario_id", []).append(error)

        error = validate_non_negative_float(self.capacity, "Capacity")
        if error:
            errors.setdefault("capacity", []).append(error)

        error = validate_finite_float(self.bound, "Bound")
        if error:
            errors.setdefault("bound", []).append(error)

        for field, label in (
            ("error_indicator", "Error indicator"),
            ("tolerance", "Tolerance"),
            ("runtime_seconds", "Runtime"),
        ):
            error = validate_non_negative_float(getattr(self, field), label)
            if error:
                errors.setdefault(field, []).append(error)

        if self.h is not None:
            error = validate_positive_float(self.h, "Grid spacing")
            if error:
                errors.setdefault("h", []).append(error)

        if self.slack is not None and not math.isfinite(self.slack):
            errors.setdefault("slack", []).append("Slack must be finite.")

        # Slack must match capacity and bound in the kind's direction
        if not errors and self.capacity is not None and self.bound is not None and self.slack is not None:
            expected = signed_slack(self.capacity, self.bound, self.kind)
            if not math.isclose(expected, self.slack, rel_tol=1e-12, abs_tol=1e-12 * max(1.0, abs(self.bound))):
                errors.setdefault("slack", []).append(
                    f"Slack {self.slack!r} does not match capacity and bound ({expected!r})."
                )

        if not errors and self.verdict != Verdict.INAPPLICABLE:
            expected = classify_slack(self.slack, self.tolerance, self.kind)
            if expected != self.verdict:
                errors.setdefault("verdict", []).append(
                    f"Verdict '{self.verdict}' is inconsistent with slack {self.slack!r} "
                    f"and tolerance {self.tolerance!r} (expected '{expected}')."
                )

        if errors:
            raise ValidationError(errors)

