# Generated by Django 4.2.25 on 2026-10-18 09:12

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SuiteRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
                (
                    "source",
                    models.CharField(
                        help_text="Scenario directory the suite was read from.",
                        max_length=500,
                    ),
                ),
                (
                    "seed",
                    models.BigIntegerField(help_text="Seed passed to randomized checks."),
                ),
                (
                    "workers",
                    models.PositiveIntegerField(
                        default=1, help_text="Number of worker processes used."
                    ),
                ),
                (
                    "holds",
                    models.PositiveIntegerField(
                        default=0, help_text="Reports with verdict 'holds'."
                    ),
                ),
                (
                    "equality",
                    models.PositiveIntegerField(
                        default=0, help_text="Reports with verdict 'equality'."
                    ),
                ),
                (
                    "fails",
                    models.PositiveIntegerField(
                        default=0, help_text="Reports with verdict 'fails'."
                    ),
                ),
                (
                    "inapplicable",
                    models.PositiveIntegerField(
                        default=0, help_text="Reports with verdict 'inapplicable'."
                    ),
                ),
                (
                    "errors",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Scenario files that failed to parse or evaluate, mapped to their error messages.",
                    ),
                ),
                (
                    "runtime_seconds",
                    models.FloatField(
                        default=0.0,
                        help_text="Wall-clock time of the whole suite in seconds.",
                    ),
                ),
            ],
            options={
                "ordering": ("-created_at",),
                "indexes": [
                    models.Index(fields=["-created_at"], name="harness_sui_created_3ddcdc_idx")
                ],
            },
        ),
        migrations.CreateModel(
            name="Report",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
                (
                    "scenario_id",
                    models.CharField(
                        help_text="Identifier from the scenario file.", max_length=100
                    ),
                ),
                (
                    "kind",
                    models.CharField(
                        choices=[
                            ("thm-3.1", "Cartan-Hadamard lower bound"),
                            ("thm-3.5", "Non-negative Ricci upper bound"),
                            ("cor-4.1", "Euclidean lower bound"),
                            ("cor-4.2", "Euclidean upper bound"),
                            ("cor-4.3", "Volume lower bound"),
                            ("cor-4.4", "Volume upper bound"),
                            ("thm-4.5", "Lambda-convex lower bound"),
                            ("szego-mean-curvature", "Mean curvature upper bound"),
                            ("szego-volume", "Isoperimetric volume bound"),
                            ("polya-szego-ratio", "Area ratio (exploratory)"),
                            ("radial-equality", "Warped model equality"),
                            ("riccati-suite", "Comparison flow suites"),
                        ],
                        help_text="Check requested by the scenario.",
                        max_length=30,
                    ),
                ),
                (
                    "inputs",
                    models.JSONField(
                        default=dict,
                        help_text="Scenario document echoed verbatim after validation.",
                    ),
                ),
                (
                    "capacity",
                    models.FloatField(
                        blank=True,
                        help_text="Computed capacity; empty for flow suites.",
                        null=True,
                    ),
                ),
                (
                    "method",
                    models.CharField(
                        choices=[
                            ("closed-form", "Closed form"),
                            ("quadrature", "Quadrature"),
                            ("energy", "Grid energy"),
                            ("flux", "Grid flux"),
                            ("none", "Not computed"),
                        ],
                        default="none",
                        help_text="How the capacity was obtained.",
                        max_length=20,
                    ),
                ),
                (
                    "error_indicator",
                    models.FloatField(
                        default=0.0,
                        help_text="Relative error indicator of the capacity.",
                    ),
                ),
                (
                    "bound",
                    models.FloatField(
                        blank=True,
                        help_text="Value of the bound the capacity is compared with.",
                        null=True,
                    ),
                ),
                (
                    "slack",
                    models.FloatField(
                        blank=True,
                        help_text="Signed slack; positive means the bound holds.",
                        null=True,
                    ),
                ),
                (
                    "tolerance",
                    models.FloatField(
                        default=0.0,
                        help_text="Band around zero slack declared as equality.",
                    ),
                ),
                (
                    "verdict",
                    models.CharField(
                        choices=[
                            ("holds", "Holds"),
                            ("equality", "Equality within tolerance"),
                            ("fails", "Fails"),
                            ("inapplicable", "Inapplicable"),
                        ],
                        help_text="Outcome of the check.",
                        max_length=20,
                    ),
                ),
                (
                    "h",
                    models.FloatField(
                        blank=True,
                        help_text="Finest grid spacing used, if a grid solve was involved.",
                        null=True,
                    ),
                ),
                (
                    "runtime_seconds",
                    models.FloatField(
                        default=0.0,
                        help_text="Wall-clock time of the scenario in seconds.",
                    ),
                ),
                (
                    "provenance",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Origin tag (closed-form, quadrature, grid, user, derived) of every reported number.",
                    ),
                ),
                (
                    "details",
                    models.JSONField(
                        blank=True,
                        default=dict,
                        help_text="Diagnostics: curvature derivation, certificates, traces.",
                    ),
                ),
                (
                    "suite_run",
                    models.ForeignKey(
                        blank=True,
                        help_text="Suite this report belongs to; empty for single runs.",
                        null=True,
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="reports",
                        to="harness.suiterun",
                    ),
                ),
            ],
            options={
                "ordering": ("scenario_id",),
                "indexes": [
                    models.Index(fields=["scenario_id"], name="harness_rep_scenari_4dbcfe_idx"),
                    models.Index(fields=["kind", "verdict"], name="harness_rep_kind_2b0d19_idx"),
                ],
            },
        ),
    ]
