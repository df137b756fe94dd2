"""YAML files for systems, datasets and estimates."""

import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from pclq.core.base import LqSystem, Matrix
from pclq.estimation.base import Dataset
from pclq.structure.base import SparsityBlocks

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class _Dumper(yaml.SafeDumper):
    """Safe dumper writing floats with 17 significant digits."""


def _represent_float(dumper: yaml.SafeDumper, value: float) -> yaml.ScalarNode:
    if not math.isfinite(value):
        return dumper.represent_float(value)
    return dumper.represent_scalar("tag:yaml.org,2002:float", format(value, ".16e"))


_Dumper.add_representer(float, _represent_float)


def _rows(m: Matrix) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(m)]


def _matrix(rows: Any, n_cols: int) -> Matrix:
    """Rebuild a matrix from a list of rows, keeping the column count for empty inputs."""
    if not rows:
        return np.zeros((0, n_cols))
    return np.array(rows, dtype=np.float64).reshape(len(rows), n_cols)


def format_yaml(payload: dict[str, Any]) -> str:
    """Render a mapping as YAML text with full-precision floats."""
    return yaml.dump(payload, Dumper=_Dumper, sort_keys=False, default_flow_style=None, width=4096)


def dump_yaml(path: str | Path, payload: dict[str, Any]) -> None:
    """Write a mapping as UTF-8 YAML."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as f:
            f.write(format_yaml(payload))
    except OSError as e:
        msg = f"cannot write {path}: {e}"
        raise OSError(msg) from e
    logger.debug(f"Wrote {path}")


def load_yaml(path: str | Path) -> dict[str, Any]:
    """Read a YAML mapping."""
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as f:
            payload = yaml.safe_load(f)
    except OSError as e:
        msg = f"cannot read {path}: {e}"
        raise OSError(msg) from e
    if not isinstance(payload, dict):
        msg = f"{path} does not contain a mapping"
        raise ValueError(msg)
    version = payload.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        msg = f"{path} has unsupported format_version {version}"
        raise ValueError(msg)
    return payload


def _blocks_payload(blocks: SparsityBlocks | None) -> dict[str, Any]:
    if blocks is None:
        return {}
    return {"blocks": blocks.model_dump()}


def _read_blocks(payload: dict[str, Any]) -> SparsityBlocks | None:
    raw = payload.get("blocks")
    return None if raw is None else SparsityBlocks(**raw)


def write_system(
    path: str | Path,
    system: LqSystem,
    blocks: SparsityBlocks | None = None,
    metadata: dict[str, Any] | None = None,
) -> None:
    """Write an LQ system (and optional block labels) to a YAML file."""
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "d": system.d,
        "d_u": system.d_u,
        "A": _rows(system.a),
        "B": _rows(system.b),
        "Q": _rows(system.q),
        "R": _rows(system.r),
    }
    payload.update(_blocks_payload(blocks))
    if metadata:
        payload["metadata"] = metadata
    dump_yaml(path, payload)


def read_system(path: str | Path) -> tuple[LqSystem, SparsityBlocks | None]:
    """Read an LQ system file."""
    payload = load_yaml(path)
    d, d_u = int(payload["d"]), int(payload["d_u"])
    system = LqSystem(
        a=_matrix(payload["A"], d),
        b=_matrix(payload["B"], d_u),
        q=_matrix(payload["Q"], d),
        r=_matrix(payload["R"], d_u),
    )
    return system, _read_blocks(payload)


def write_dataset(path: str | Path, ds: Dataset, blocks: SparsityBlocks | None = None) -> None:
    """Write transition samples to a YAML file."""
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "N": ds.n,
        "d": ds.d,
        "d_u": ds.d_u,
        "sigma0": float(ds.sigma0),
        "X0": _rows(ds.x0),
        "U0": _rows(ds.u0),
        "X1": _rows(ds.x1),
    }
    payload.update(_blocks_payload(blocks))
    dump_yaml(path, payload)


def read_dataset(path: str | Path) -> tuple[Dataset, SparsityBlocks | None]:
    """Read a dataset file."""
    payload = load_yaml(path)
    d, d_u = int(payload["d"]), int(payload["d_u"])
    ds = Dataset(
        x0=_matrix(payload["X0"], d),
        u0=_matrix(payload["U0"], d_u),
        x1=_matrix(payload["X1"], d),
        sigma0=float(payload.get("sigma0", 0.0)),
    )
    if ds.n != int(payload.get("N", ds.n)):
        msg = f"{path}: N={payload['N']} but {ds.n} rows were read"
        raise ValueError(msg)
    return ds, _read_blocks(payload)


def write_estimate(path: str | Path, a_bar: Matrix, b_bar: Matrix, report: dict[str, Any]) -> None:
    """Write a thresholded estimate and its zero-pattern report."""
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "d": int(a_bar.shape[0]),
        "d_u": int(b_bar.shape[1]),
        "A": _rows(a_bar),
        "B": _rows(b_bar),
        "report": report,
    }
    dump_yaml(path, payload)
