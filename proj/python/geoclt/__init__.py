"""Hulls of random boundary points under projective metrics.

Thin wrappers over the compiled ``_geoclt`` module; JSON-valued results are
decoded into Python objects.
"""

import csv
import io
import json

from . import _geoclt
from ._geoclt import (  # noqa: F401
    ConfigError,
    DataError,
    DomainError,
    Error,
    ExperimentAbort,
    InputError,
    ModelError,
    NumericalError,
    SupportBody,
    dual_volume,
    hilbert_distance,
    hilbert_line_integral,
    hull_vertices,
    hull_volume,
    kolmogorov_distance,
    mean_width,
    mean_width_dual,
    sample_boundary,
    standardize,
    variance_scaling_fit,
)

__version__ = _geoclt.__version__


def _quad(q):
    return json.dumps(q) if q else ""


def config(toml_text):
    """Validated config as a dict."""
    return json.loads(_geoclt.config_json(toml_text))


def weighted_volume(points, geometry, body, quadrature=None):
    return _geoclt.weighted_volume(points, json.dumps(geometry), body, _quad(quadrature))


def phi(geometry, body, x):
    return _geoclt.phi(json.dumps(geometry), body, x)


def run_experiment(toml_text, threads=0):
    """Returns (report dict, list of record dicts)."""
    report, records = _geoclt.run_experiment(toml_text, threads)
    rows = list(csv.DictReader(io.StringIO(records)))
    for r in rows:
        r["n"] = int(r["n"])
        r["replication"] = int(r["replication"])
        r["value"] = float(r["value"])
        r["aux"] = float(r["aux"])
    return json.loads(report), rows


def run_diagnostic(toml_text, threads=0):
    rows = list(csv.DictReader(io.StringIO(_geoclt.run_diagnostic(toml_text, threads))))
    for r in rows:
        for k in ("param", "estimate", "stderr"):
            r[k] = float(r[k])
        r["samples"] = int(r["samples"])
    return rows
