"""Read scenario files: YAML documents with nested sections."""

import copy
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from harness.exceptions import ScenarioParseError

logger = logging.getLogger(__name__)

SCENARIO_SUFFIXES = (".yaml", ".yml")
FILE_REFERENCES = (("body_file", "body"), ("model_file", "model"))

# CLI flags and where they land in the scenario document.
OVERRIDE_TARGETS = {
    "h": ("capacity", "h"),
    "outer": ("capacity", "outer"),
    "growth": ("capacity", "growth"),
    "tol": ("capacity", "tol"),
    "seed": ("suite", "seed"),
}


@dataclass(frozen=True)
class Scenario:
    """
    A validated scenario.

    ``document`` is the validated data, plain YAML types only, so scenarios
    can be shipped to worker processes. ``inputs`` is the document as read,
    with referenced descriptor files inlined, for echoing in reports.
    """

    id: str
    kind: str
    document: Dict[str, Any]
    inputs: Dict[str, Any]
    path: Optional[str] = None


def _read_yaml(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioParseError(f"Cannot read {path}: {str(e)}", path=str(path))
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioParseError(f"{path} is not valid YAML: {str(e)}", path=str(path))


def _inline_references(data: Dict[str, Any], base_dir: Optional[Path], path: Optional[str]) -> Dict[str, Any]:
    """Replace ``body_file``/``model_file`` by the parsed descriptor, resolved against ``base_dir``."""
    data = copy.deepcopy(data)
    for reference, key in FILE_REFERENCES:
        if reference not in data:
            continue
        if key in data:
            raise ScenarioParseError(
                f"Give either {key} or {reference}, not both.",
                errors={reference: [f"Conflicts with {key}."]},
                path=path,
            )
        target = Path(str(data.pop(reference)))
        if not target.is_absolute() and base_dir is not None:
            target = base_dir / target
        data[key] = _read_yaml(target)
        data.setdefault("sources", {})[key] = str(target)
    return data


def apply_overrides(data: Dict[str, Any], overrides: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Return a copy of ``data`` with the non-None CLI overrides written into their sections."""
    data = copy.deepcopy(data)
    for name, value in (overrides or {}).items():
        if value is None or name not in OVERRIDE_TARGETS:
            continue
        section, key = OVERRIDE_TARGETS[name]
        if section == "suite" and data.get("kind") != "riccati-suite":
            continue
        data.setdefault(section, {})
        if not isinstance(data[section], dict):
            continue
        data[section][key] = value
        if key == "h":
            data[section].pop("h_schedule", None)
    return data


def _plain(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def validate_scenario(
    data: Any,
    base_dir: Optional[Path] = None,
    path: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> Scenario:
    """Validate a scenario mapping.

    Raises:
        ScenarioParseError: If the document is not a mapping, a referenced
            file cannot be read, or validation fails; ``errors`` carries the
            serializer errors.
    """
    from harness.serializers import ScenarioSerializer  # pylint: disable=import-outside-toplevel

    if not isinstance(data, dict):
        raise ScenarioParseError("Scenario document must be a mapping.", path=path)
    inputs = apply_overrides(_inline_references(data, base_dir, path), overrides)
    sources = inputs.pop("sources", None)
    serializer = ScenarioSerializer(data=inputs)
    if not serializer.is_valid():
        raise ScenarioParseError(f"Invalid scenario: {serializer.errors}", errors=serializer.errors, path=path)
    if sources:
        inputs["sources"] = sources
    document = _plain(serializer.validated_data)
    return Scenario(id=document["id"], kind=document["kind"], document=document, inputs=inputs, path=path)


def load_scenario(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> Scenario:
    """Read and validate one scenario file; relative descriptor paths resolve against its directory."""
    path = Path(path)
    return validate_scenario(_read_yaml(path), base_dir=path.parent, path=str(path), overrides=overrides)


def load_directory(
    directory: Union[str, Path],
    overrides: Optional[Dict[str, Any]] = None,
) -> Tuple[List[Scenario], Dict[str, str]]:
    """Load every ``*.yaml``/``*.yml`` file directly inside ``directory``.

    Returns:
        Tuple of (scenarios sorted by id, mapping of failed file -> error message).

    Raises:
        ScenarioParseError: If ``directory`` does not exist. Files that fail to
            parse, or reuse an id already taken, are listed in the failures.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ScenarioParseError(f"Scenario directory not found: {directory}", path=str(directory))

    scenarios: List[Scenario] = []
    failures: Dict[str, str] = {}
    for path in sorted(p for p in directory.iterdir() if p.suffix in SCENARIO_SUFFIXES and p.is_file()):
        try:
            scenarios.append(load_scenario(path, overrides))
        except ScenarioParseError as e:
            logger.warning("Skipping %s: %s", path.name, str(e))
            failures[path.name] = str(e)

    unique: Dict[str, Scenario] = {}
    for scenario in scenarios:
        if scenario.id in unique:
            name = Path(scenario.path).name
            failures[name] = f"Scenario id '{scenario.id}' already used by {Path(unique[scenario.id].path).name}."
            logger.warning("Skipping %s: %s", name, failures[name])
            continue
        unique[scenario.id] = scenario
    return sorted(unique.values(), key=lambda s: s.id), failures
