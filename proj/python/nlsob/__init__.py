"""Python bindings for the nlsob C++ core."""

import json

from . import _core
from ._core import (
    NumericalError,
    Params,
    RadialField,
    RadialGrid,
    ValidationError,
    bubble,
    el_residual,
    harmonic_multiplicity,
    hls_energy,
    hls_sharp_constant,
    log_grid,
    read_csv,
    riesz_potential,
    sample,
    sobolev_constant,
    sphere_area,
    strong_norm,
    tail_energy,
    tail_energy_quadrature,
    weak_norm,
    write_csv,
)

__version__ = _core.__version__


def deficit(u, params):
    """Energy, HLS term, deficit, distance and deficit/distance^2 as a dict."""
    return json.loads(_core.deficit(u, params))


def dist_to_manifold(u, params):
    """Returns (c, lam, d, w) for the nearest radial bubble c U_lam."""
    return _core.dist_to_manifold(u, params)


def sector_spectrum(params, ell, grid=None, k=8):
    """Lowest k generalized eigenvalues of angular sector ell, as a numpy array."""
    values, _ = _core.sector_spectrum(params, ell, grid or log_grid(n=1024), k)
    return values


def spectral_gap(params, grid=None, per_sector=8):
    return json.loads(_core.spectral_gap(params, grid or log_grid(n=1024), per_sector))


def bounded_domain_experiment(params, R, lambdas):
    return json.loads(_core.bounded_domain_experiment(params, R, list(lambdas)))


def run_cli(*args):
    """Runs the command line tool in process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
