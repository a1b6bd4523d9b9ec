"""Energy-stable 2D TM FDTD on staggered grids.

Spatial differences satisfy a summation-by-parts identity, boundaries
and refinement interfaces are enforced weakly through penalty terms,
and multi-block meshes with integer refinement ratios couple without
spurious energy growth.  See README.md for the CLI and config format.
"""

from .boundary import PecSatParams
from .config import (ScenarioConfig, build_system, load_config, parse_config,
                     serialize_config, validate_config)
from .grid2d import MeshBlock, build_block
from .integrator import (estimate_max_timestep, spectral_stability_report,
                         staggered_energy, step)
from .interface import InterfaceCoupling, build_coupling
from .presets import PRESET_NAMES, accuracy_trio, build_preset
from .runner import RunResult, run_scenario
from .sbp1d import FAMILIES, build_sbp_1d, build_staggered_axis
from .system import SimSystem, zero_states

__version__ = "0.1.0"

__all__ = [
    "FAMILIES",
    "InterfaceCoupling",
    "MeshBlock",
    "PRESET_NAMES",
    "PecSatParams",
    "RunResult",
    "ScenarioConfig",
    "SimSystem",
    "accuracy_trio",
    "build_block",
    "build_coupling",
    "build_preset",
    "build_sbp_1d",
    "build_staggered_axis",
    "build_system",
    "estimate_max_timestep",
    "load_config",
    "parse_config",
    "run_scenario",
    "serialize_config",
    "spectral_stability_report",
    "staggered_energy",
    "step",
    "validate_config",
    "zero_states",
]
