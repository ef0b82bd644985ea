"""Serializers validating scenario documents."""

from rest_framework import serializers

from capacity_lab.choices import CapacityMethod, ScenarioKind, SolveMode
from capacity_lab.validators import validate_scenario_identifier
from geometry.exceptions import DescriptorError
from geometry.services.descriptors import body_from_descriptor
from manifolds.exceptions import ModelDescriptorError
from manifolds.services.descriptors import model_from_descriptor

CAPACITY_METHODS = ("auto", CapacityMethod.CLOSED_FORM.value, CapacityMethod.QUADRATURE.value, "grid")
GRID_ESTIMATORS = (CapacityMethod.ENERGY.value, CapacityMethod.FLUX.value)

BODY_ONLY_KINDS = frozenset({
    ScenarioKind.COR_4_1.value,
    ScenarioKind.COR_4_2.value,
    ScenarioKind.COR_4_3.value,
    ScenarioKind.COR_4_4.value,
    ScenarioKind.THM_4_5.value,
    ScenarioKind.SZEGO_MEAN_CURVATURE.value,
    ScenarioKind.SZEGO_VOLUME.value,
    ScenarioKind.POLYA_SZEGO_RATIO.value,
})
BODY_OR_MODEL_KINDS = frozenset({ScenarioKind.THM_3_1.value, ScenarioKind.THM_3_5.value})
MODEL_ONLY_KINDS = frozenset({ScenarioKind.RADIAL_EQUALITY.value})


class CapacitySpecSerializer(serializers.Serializer):
    """
    How the capacity of a body is computed.

    ``auto`` uses the closed form for balls and the grid otherwise. Grid
    capacities come from exhaustion over outer spheres starting at
    ``outer`` and growing by ``growth``; ``richardson`` repeats the
    exhaustion at half spacing and extrapolates.
    """
    method = serializers.ChoiceField(choices=CAPACITY_METHODS, default="auto")
    estimator = serializers.ChoiceField(choices=GRID_ESTIMATORS, default=CapacityMethod.ENERGY.value)
    mode = serializers.ChoiceField(choices=SolveMode.choices, default=SolveMode.AUTO.value)
    h = serializers.FloatField(required=False, min_value=0.0)
    h_schedule = serializers.ListField(
        child=serializers.FloatField(min_value=0.0), required=False, min_length=1
    )
    outer = serializers.FloatField(required=False, min_value=0.0)
    growth = serializers.FloatField(required=False, min_value=1.5)
    max_steps = serializers.IntegerField(required=False, min_value=2)
    tol = serializers.FloatField(required=False, min_value=0.0)
    richardson = serializers.BooleanField(default=False)
    sphericity = serializers.BooleanField(default=False)

    def validate(self, attrs):
        errors = {}
        for name in ("h", "outer", "tol"):
            if name in attrs and attrs[name] <= 0:
                errors[name] = ["Must be greater than zero."]
        if any(value <= 0 for value in attrs.get("h_schedule", [])):
            errors["h_schedule"] = ["Spacings must be greater than zero."]
        if "h" in attrs and "h_schedule" in attrs:
            errors["h_schedule"] = ["Give either h or h_schedule, not both."]
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class SuiteSpecSerializer(serializers.Serializer):
    """Parameters of the randomized comparison-flow suites."""
    count = serializers.IntegerField(required=False, min_value=1)
    seed = serializers.IntegerField(required=False)
    r_max = serializers.FloatField(required=False, min_value=0.0)
    step = serializers.FloatField(required=False, min_value=0.0)
    n = serializers.IntegerField(required=False, min_value=1)

    def validate(self, attrs):
        errors = {
            name: ["Must be greater than zero."]
            for name in ("r_max", "step")
            if name in attrs and attrs[name] <= 0
        }
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class ScenarioSerializer(serializers.Serializer):
    """
    Serializer for scenario documents.

    Body and model references must already be inlined as mappings (the
    loader reads ``body_file``/``model_file``). Descriptors are validated by
    building them, so a scenario that parses can always be evaluated.
    """
    id = serializers.CharField(max_length=100)
    kind = serializers.ChoiceField(choices=ScenarioKind.choices)
    description = serializers.CharField(required=False, allow_blank=True)
    body = serializers.DictField(required=False)
    model = serializers.DictField(required=False)
    h0 = serializers.FloatField(required=False)
    t0 = serializers.FloatField(required=False)
    lam = serializers.FloatField(required=False)
    resolution = serializers.IntegerField(required=False, min_value=8)
    capacity = CapacitySpecSerializer(required=False)
    suite = SuiteSpecSerializer(required=False)

    def validate_id(self, value):
        error = validate_scenario_identifier(value)
        if error:
            raise serializers.ValidationError(error)
        return value

    def validate_h0(self, value):
        if not value > 0:
            raise serializers.ValidationError("H0 must be greater than zero.")
        return value

    def validate_t0(self, value):
        if not value > 0:
            raise serializers.ValidationError("Geodesic ball radius must be greater than zero.")
        return value

    def validate_lam(self, value):
        if not value > 0:
            raise serializers.ValidationError("Lambda must be greater than zero.")
        return value

    def validate_body(self, value):
        try:
            body_from_descriptor(value)
        except DescriptorError as e:
            raise serializers.ValidationError(e.errors or str(e))
        return value

    def validate_model(self, value):
        try:
            model_from_descriptor(value)
        except ModelDescriptorError as e:
            raise serializers.ValidationError(e.errors or str(e))
        return value

    def validate(self, attrs):
        kind = attrs["kind"]
        has_body = "body" in attrs
        has_model = "model" in attrs
        errors = {}

        if kind in BODY_ONLY_KINDS:
            if not has_body:
                errors["body"] = ["This kind needs a body."]
            if has_model:
                errors["model"] = ["This kind is defined for Euclidean bodies only."]
        elif kind in BODY_OR_MODEL_KINDS:
            if has_body == has_model:
                errors["non_field_errors"] = ["Give exactly one of body or model."]
        elif kind in MODEL_ONLY_KINDS and not has_model:
            errors["model"] = ["This kind needs a warped model."]

        if has_model and "t0" not in attrs:
            errors["t0"] = ["Model scenarios need the geodesic ball radius t0."]
        if kind == ScenarioKind.THM_4_5 and "h0" not in attrs and "lam" not in attrs:
            errors["h0"] = ["Lambda-convex bounds need H0 (or lam)."]
        if kind == ScenarioKind.RICCATI_SUITE and (has_body or has_model):
            errors["non_field_errors"] = ["Flow suites take no geometry."]

        method = attrs.get("capacity", {}).get("method", "auto")
        if has_model and method not in ("auto", CapacityMethod.QUADRATURE):
            errors.setdefault("capacity", []).append("Model capacities are computed by quadrature.")
        if has_body and method == CapacityMethod.QUADRATURE:
            errors.setdefault("capacity", []).append("Quadrature applies to warped models only.")

        if errors:
            raise serializers.ValidationError(errors)
        return attrs
