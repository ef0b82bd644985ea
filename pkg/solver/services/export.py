"""Flat binary export of solved potentials with a plain-text header.

The layout is described in ``docs/potential-format.md``.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np
import yaml

from django.conf import settings

from capacity_lab.choices import SolveMode
from solver.exceptions import SolverError
from solver.services.dirichlet import DiscretePotential

logger = logging.getLogger(__name__)

FORMAT_NAME = "capacity-lab-potential"
FORMAT_VERSION = 1
DTYPE = "<f8"


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.ndarray, np.generic)):
        return value.tolist()
    return value


def potential_header(u: DiscretePotential) -> Dict[str, Any]:
    grid = u.grid
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "dtype": "float64",
        "byte_order": "little",
        "order": "C",
        "mode": str(grid.mode),
        "shape": list(grid.shape),
        "spacing": grid.h,
        "origin": [float(axis[0]) for axis in grid.axes],
        "centre": grid.centre,
        "outer_radius": grid.outer_radius,
        "residual_norm": u.residual_norm,
        "iterations": u.iterations,
        "solver": u.solver,
        "body": grid.body.descriptor,
    }
    if grid.mode == SolveMode.AXISYM:
        header["axis_direction"] = grid.direction
        header["radial_direction"] = grid.radial
    return _plain(header)


def export_potential(u: DiscretePotential, path: Union[str, Path]) -> Tuple[Path, Path]:
    """Write ``<path>.bin`` (node values) and ``<path>.txt`` (header); return both paths.

    Relative paths are taken under ``CAP_REPORT_DIR``.
    """
    base = Path(path)
    if not base.is_absolute():
        base = Path(settings.CAP_REPORT_DIR) / base
    binary, text = Path(f"{base}.bin"), Path(f"{base}.txt")
    try:
        base.parent.mkdir(parents=True, exist_ok=True)
        np.ascontiguousarray(u.values, dtype=DTYPE).tofile(binary)
        text.write_text(yaml.safe_dump(potential_header(u), sort_keys=False))
    except OSError as e:
        raise SolverError(f"Could not export potential to {base}: {str(e)}")
    logger.info("Exported potential %s to %s", u.grid.shape, binary)
    return binary, text


def read_potential(path: Union[str, Path]) -> Tuple[Dict[str, Any], np.ndarray]:
    """Read an exported potential back as ``(header, values)``."""
    base = Path(path)
    if not base.is_absolute():
        base = Path(settings.CAP_REPORT_DIR) / base
    try:
        header = yaml.safe_load(Path(f"{base}.txt").read_text())
        values = np.fromfile(Path(f"{base}.bin"), dtype=DTYPE)
    except (OSError, yaml.YAMLError) as e:
        raise SolverError(f"Could not read potential {base}: {str(e)}")
    if header.get("format") != FORMAT_NAME:
        raise SolverError(f"{base}.txt is not a potential header.")
    shape = tuple(header["shape"])
    if values.size != int(np.prod(shape)):
        raise SolverError(f"{base}.bin holds {values.size} values, header expects shape {shape}.")
    return header, values.reshape(shape)
