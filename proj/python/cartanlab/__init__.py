"""Exact and numerical checks for higher-rank toral actions."""

import json

from ._core import (
    CartanlabError,
    averaging_schedule,
    brin_katok_entropy,
    chambers,
    char_poly,
    density_profile,
    furstenberg_rational_orbit,
    gap_ratio_profile,
    kak,
    lie_closure_dim,
    lyapunov_functionals,
    partition_entropy,
    qr_oseledec,
    real_spectrum,
    run_cli,
    semigroup_elements,
    shear_probe,
    suspension_check,
    validate,
)


def run(*args):
    """Run a command line and return the parsed JSON report and the exit code."""
    code, out, err = run_cli([str(a) for a in args])
    if code == 1:
        raise CartanlabError(err.strip())
    return json.loads(out), code


__all__ = [
    "CartanlabError",
    "averaging_schedule",
    "brin_katok_entropy",
    "chambers",
    "char_poly",
    "density_profile",
    "furstenberg_rational_orbit",
    "gap_ratio_profile",
    "kak",
    "lie_closure_dim",
    "lyapunov_functionals",
    "partition_entropy",
    "qr_oseledec",
    "real_spectrum",
    "run",
    "run_cli",
    "semigroup_elements",
    "shear_probe",
    "suspension_check",
    "validate",
]
