"""Python access to the interferometer network toolkit."""

import json

from ._ifo import (
    ResonanceError,
    SolverError,
    ValidationError,
    bias_for_gain,
    ctn_strain_asd,
    first_notch_frequency,
    gamma_phase,
    gm_nsr,
    ideal_transmission,
    mode_names,
    power_gain,
    preset_names,
    validate,
)
from . import _ifo


def resolve_config(text="", preset="", sets=()):
    """Resolved scenario (config, provenance, derived values) as a dict."""
    return json.loads(_ifo._resolve_config(text, preset, list(sets)))


def run(mode, out_dir, config_path="", preset="", sets=()):
    """Runs one CLI mode in-process. Returns (exit_code, outputs, metadata)."""
    code, outputs, meta = _ifo._run(mode, str(out_dir), str(config_path), preset, list(sets))
    return code, outputs, json.loads(meta)


__all__ = [
    "ResonanceError",
    "SolverError",
    "ValidationError",
    "bias_for_gain",
    "ctn_strain_asd",
    "first_notch_frequency",
    "gamma_phase",
    "gm_nsr",
    "ideal_transmission",
    "mode_names",
    "power_gain",
    "preset_names",
    "resolve_config",
    "run",
    "validate",
]
