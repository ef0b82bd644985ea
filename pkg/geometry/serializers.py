"""Serializers validating body descriptor documents."""

from rest_framework import serializers

from geometry.exceptions import GeometryError
from geometry.services.bodies import Ball, Ellipsoid, Halfspace, Intersection, ParallelBody

BODY_KINDS = ("ball", "ellipsoid", "intersection", "parallel")
COMPONENT_KINDS = ("ball", "ellipsoid", "halfspace")


class PointField(serializers.ListField):
    """Coordinate list of floats with a minimum length of three."""

    def __init__(self, **kwargs):
        kwargs.setdefault("child", serializers.FloatField())
        kwargs.setdefault("min_length", 3)
        super().__init__(**kwargs)


class BodyDescriptorSerializer(serializers.Serializer):
    """
    Serializer for body descriptors.

    Validates the kind-specific parameters and builds the body in ``create``.
    Intersection components and parallel-body bases are validated recursively.
    """
    kind = serializers.ChoiceField(choices=BODY_KINDS + ("halfspace",))
    center = PointField(required=False, default=[0.0, 0.0, 0.0])
    radius = serializers.FloatField(required=False, min_value=0.0)
    semi_axes = PointField(required=False, max_length=3)
    normal = PointField(required=False)
    offset = serializers.FloatField(required=False)
    components = serializers.ListField(child=serializers.DictField(), required=False, min_length=2)
    base = serializers.DictField(required=False)

    def __init__(self, *args, component=False, **kwargs):
        super().__init__(*args, **kwargs)
        self.component = component

    def validate_kind(self, value):
        """Halfspaces are unbounded and only allowed inside intersections."""
        allowed = COMPONENT_KINDS if self.component else BODY_KINDS
        if value not in allowed:
            raise serializers.ValidationError(
                f"Kind '{value}' is not allowed here; expected one of {', '.join(allowed)}."
            )
        return value

    def validate_semi_axes(self, value):
        if any(axis <= 0 for axis in value):
            raise serializers.ValidationError("Semi-axes must be positive.")
        return value

    def validate(self, attrs):
        kind = attrs["kind"]
        required = {
            "ball": ["radius"],
            "ellipsoid": ["semi_axes"],
            "halfspace": ["normal", "offset"],
            "intersection": ["components"],
            "parallel": ["base", "offset"],
        }[kind]
        missing = {name: ["This field is required."] for name in required if name not in attrs}
        if missing:
            raise serializers.ValidationError(missing)

        if kind == "ellipsoid" and len(attrs["center"]) != 3:
            raise serializers.ValidationError({"center": ["Ellipsoids are defined in R^3."]})
        if kind == "parallel" and attrs["offset"] < 0:
            raise serializers.ValidationError({"offset": ["Inner parallel bodies are not supported."]})

        if kind == "intersection":
            attrs["components"] = [
                self._nested(item, component=True, field="components") for item in attrs["components"]
            ]
        if kind == "parallel":
            attrs["base"] = self._nested(attrs["base"], component=False, field="base")
        return attrs

    def _nested(self, data, component, field):
        nested = BodyDescriptorSerializer(data=data, component=component)
        if not nested.is_valid():
            raise serializers.ValidationError({field: nested.errors})
        return nested.validated_data

    def create(self, validated_data):
        """Build the body described by the validated document."""
        try:
            return build_body(validated_data)
        except GeometryError as e:
            raise serializers.ValidationError({'non_field_errors': [str(e)]})


def build_body(data):
    """Construct a body from validated descriptor data."""
    kind = data["kind"]
    if kind == "ball":
        return Ball(data["center"], data["radius"])
    if kind == "ellipsoid":
        return Ellipsoid(data["center"], data["semi_axes"])
    if kind == "halfspace":
        return Halfspace(data["normal"], data["offset"])
    if kind == "intersection":
        return Intersection([build_body(item) for item in data["components"]])
    return ParallelBody(build_body(data["base"]), data["offset"])
