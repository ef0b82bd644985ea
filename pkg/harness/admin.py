from django.contrib import admin

from .models import Report, SuiteRun


class ReportInline(admin.TabularInline):
    """Inline display of reports within a suite run."""

    model = Report
    extra = 0
    fields = (
        "scenario_id",
        "kind",
        "capacity",
        "method",
        "bound",
        "slack",
        "verdict",
        "h",
        "runtime_seconds",
    )
    readonly_fields = fields
    ordering = ("scenario_id",)
    can_delete = False


@admin.register(SuiteRun)
class SuiteRunAdmin(admin.ModelAdmin):
    list_display = (
        "source",
        "seed",
        "workers",
        "holds",
        "equality",
        "fails",
        "inapplicable",
        "runtime_seconds",
        "created_at",
    )
    list_filter = ("created_at",)
    search_fields = ("source",)
    ordering = ("-created_at",)
    readonly_fields = ("created_at", "updated_at")
    inlines = (ReportInline,)
    fieldsets = (
        (None, {"fields": ("source", "seed", "workers")}),
        ("Verdicts", {"fields": ("holds", "equality", "fails", "inapplicable", "errors")}),
        ("Metadata", {"fields": ("runtime_seconds", "created_at", "updated_at")}),
    )


@admin.register(Report)
class ReportAdmin(admin.ModelAdmin):
    list_display = (
        "scenario_id",
        "kind",
        "get_capacity",
        "method",
        "get_bound",
        "get_slack",
        "verdict",
        "suite_run",
        "created_at",
    )
    list_filter = ("kind", "verdict", "method")
    search_fields = ("scenario_id",)
    ordering = ("scenario_id", "-created_at")
    readonly_fields = ("created_at", "updated_at")
    fieldsets = (
        (None, {"fields": ("suite_run", "scenario_id", "kind", "inputs")}),
        ("Capacity", {"fields": ("capacity", "method", "error_indicator", "h")}),
        ("Check", {"fields": ("bound", "slack", "tolerance", "verdict")}),
        ("Provenance", {"fields": ("provenance", "details", "runtime_seconds", "created_at", "updated_at")}),
    )

    @admin.display(description="Capacity", ordering="capacity")
    def get_capacity(self, obj):
        return f"{obj.capacity:.12g}" if obj.capacity is not None else "-"

    @admin.display(description="Bound", ordering="bound")
    def get_bound(self, obj):
        return f"{obj.bound:.12g}" if obj.bound is not None else "-"

    @admin.display(description="Slack", ordering="slack")
    def get_slack(self, obj):
        return f"{obj.slack:+.3e}" if obj.slack is not None else "-"
