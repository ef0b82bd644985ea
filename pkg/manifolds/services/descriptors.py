"""Load warped models from YAML descriptor documents."""

from pathlib import Path
from typing import Any, Dict, Union

import yaml

from manifolds.exceptions import ModelDescriptorError
from manifolds.services.warped import WarpedModel


def model_from_descriptor(data: Dict[str, Any]) -> WarpedModel:
    """Validate a descriptor mapping and build the model.

    Raises:
        ModelDescriptorError: If validation or construction fails.
    """
    from manifolds.serializers import ModelDescriptorSerializer  # pylint: disable=import-outside-toplevel

    if not isinstance(data, dict):
        raise ModelDescriptorError("Model descriptor must be a mapping.")
    serializer = ModelDescriptorSerializer(data=data)
    if not serializer.is_valid():
        raise ModelDescriptorError(f"Invalid model descriptor: {serializer.errors}", errors=serializer.errors)
    try:
        return serializer.save()
    except Exception as e:
        raise ModelDescriptorError(f"Model construction failed: {str(e)}")


def parse_model(text: str) -> WarpedModel:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ModelDescriptorError(f"Model descriptor is not valid YAML: {str(e)}")
    return model_from_descriptor(data)


def load_model(path: Union[str, Path]) -> WarpedModel:
    """Read and parse a UTF-8 model descriptor file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ModelDescriptorError(f"Cannot read model descriptor {path}: {str(e)}")
    return parse_model(text)
