"""Serializers validating warped model descriptor documents."""

from rest_framework import serializers

from capacity_lab.choices import ModelKind, ProfileName
from manifolds.exceptions import ManifoldError
from manifolds.services.constructions import build_model


class TableRowField(serializers.ListField):
    """One ``(t, g)`` pair of a tabulated profile."""

    def __init__(self, **kwargs):
        kwargs.setdefault("child", serializers.FloatField())
        kwargs.setdefault("min_length", 2)
        kwargs.setdefault("max_length", 2)
        super().__init__(**kwargs)


class ModelDescriptorSerializer(serializers.Serializer):
    """
    Serializer for warped model descriptors.

    Profile parameters sit at the top level of the document next to ``kind``,
    ``n`` and ``profile``; ``create`` builds the model.
    """
    kind = serializers.ChoiceField(choices=ModelKind.choices, default=ModelKind.CLOSED)
    n = serializers.IntegerField(min_value=1)
    profile = serializers.ChoiceField(choices=ProfileName.choices)
    curvature = serializers.FloatField(required=False)
    t0 = serializers.FloatField(required=False, min_value=0.0)
    h0 = serializers.FloatField(required=False, min_value=0.0)
    table = serializers.ListField(child=TableRowField(), required=False, min_length=3)
    boundary_area = serializers.FloatField(required=False, min_value=0.0)

    REQUIRED_PARAMETERS = {
        ProfileName.REMARK_SPLICE.value: ["t0", "h0"],
        ProfileName.TABULATED.value: ["table"],
        ProfileName.AFFINE.value: ["h0"],
    }

    def validate(self, attrs):
        profile = attrs["profile"]
        missing = {
            name: ["This field is required."]
            for name in self.REQUIRED_PARAMETERS.get(profile, [])
            if name not in attrs
        }
        if attrs["kind"] == ModelKind.EXTERIOR and "boundary_area" not in attrs:
            missing["boundary_area"] = ["Exterior models need the fiber volume."]
        if missing:
            raise serializers.ValidationError(missing)

        curvature = attrs.get("curvature")
        if curvature is not None:
            if profile == ProfileName.HYPERBOLIC and curvature >= 0:
                raise serializers.ValidationError({"curvature": ["Hyperbolic curvature must be negative."]})
            if profile == ProfileName.SPHERICAL and curvature <= 0:
                raise serializers.ValidationError({"curvature": ["Spherical curvature must be positive."]})
        return attrs

    def create(self, validated_data):
        """Build the described model."""
        parameters = {
            key: validated_data[key]
            for key in ("curvature", "t0", "h0", "table")
            if key in validated_data
        }
        try:
            return build_model(
                validated_data["profile"],
                validated_data["n"],
                parameters,
                kind=validated_data["kind"],
                boundary_area=validated_data.get("boundary_area"),
            )
        except ManifoldError as e:
            raise serializers.ValidationError({'non_field_errors': [str(e)]})
