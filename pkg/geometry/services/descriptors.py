"""Load bodies from YAML descriptor documents."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from geometry.exceptions import DescriptorError
from geometry.services.bodies import ConvexBody


@dataclass(frozen=True)
class LoadedBody:
    """A body together with the exact descriptor text it was built from."""

    body: ConvexBody
    text: str


def body_from_descriptor(data: Dict[str, Any]) -> ConvexBody:
    """Validate a descriptor mapping and build the body.

    Raises:
        DescriptorError: If validation fails; ``errors`` carries the serializer errors.
    """
    from geometry.serializers import BodyDescriptorSerializer  # pylint: disable=import-outside-toplevel

    if not isinstance(data, dict):
        raise DescriptorError("Body descriptor must be a mapping.")
    serializer = BodyDescriptorSerializer(data=data)
    if not serializer.is_valid():
        raise DescriptorError(f"Invalid body descriptor: {serializer.errors}", errors=serializer.errors)
    try:
        return serializer.save()
    except Exception as e:
        raise DescriptorError(f"Body construction failed: {str(e)}")


def parse_body(text: str) -> LoadedBody:
    """Parse descriptor text (YAML) into a body, keeping the text for echoing."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise DescriptorError(f"Body descriptor is not valid YAML: {str(e)}")
    return LoadedBody(body=body_from_descriptor(data), text=text)


def load_body(path: Union[str, Path]) -> LoadedBody:
    """Read and parse a UTF-8 body descriptor file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DescriptorError(f"Cannot read body descriptor {path}: {str(e)}")
    return parse_body(text)
