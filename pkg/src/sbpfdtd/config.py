"""Scenario configuration: flat INI text, validation, system assembly.

A scenario file is human-diffable `[section]` / `key = value` text with
one section per block, interface, source, and probe, plus `[run]` for
time-marching controls and `[boundary]` for outer-edge kinds.  Parsing
is strict (unknown sections, unknown keys, and malformed values are
errors) and validation is exhaustive: every violation found is
collected and reported at once, with its config location, rather than
stopping at the first.

Material maps are described by one-line specs so configs stay flat:

    vacuum
    uniform eps_rel=2.1 sigma_e=0.01 density=1000
    head-phantom cx=0.2 cy=0.16 a=0.035 b=0.03
    pec-posts radius=4e-3 pitch=1.2e-2 x0=6e-3 rows=0.025,0.075

`head-phantom` fills a four-layer concentric ellipse (brain, CSF, dura,
skull from the inside out, equal normalized-radius steps of the tissue
table) over an air background; `pec-posts` masks every node strictly
closer than `radius` to a post center (centers at x0 + k pitch on each
listed row, in global coordinates, so posts straddling block seams
staircase consistently).
"""

from __future__ import annotations

import configparser
import copy
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvalidArgument
from .grid2d import EDGES, MaterialMap, build_block, vacuum_materials
from .interface import build_coupling
from .sbp1d import FAMILIES
from .scenario import SAR_FIELD_NORMS, TISSUES
from .system import SimSystem, validate_system

# Outer edges must be closed (pec) or absorbing (mur) in user configs;
# the open 'none' kind is for controlled experiments only.
CONFIG_BOUNDARY_KINDS = ("pec", "mur")

SOURCE_KINDS = ("gaussian", "ramped-sine")
SOURCE_PROFILES = ("point", "half-sine-y")

AIR_DENSITY = 1.2   # kg/m^3, background of the head phantom

# Phantom layers from the inside out with their normalized-radius upper
# bounds: brain core, thin CSF/dura shells, skull outermost.
PHANTOM_LAYERS = (("brain", 0.5), ("csf", 0.65), ("dura", 0.8), ("skull", 1.0))


@dataclass
class BlockConfig:
    id: str
    origin: tuple[float, float]
    nx: int
    ny: int
    h: float
    material: str = "vacuum"


@dataclass
class InterfaceConfig:
    coarse: str
    fine: str
    edge_of_coarse: str
    ratio: int


@dataclass
class SourceConfig:
    kind: str
    position: tuple[float, float]
    amplitude: float = 1.0
    f_bw: float | None = None
    tau: float | None = None
    t0: float | None = None
    f0: float | None = None
    n_ramp_periods: int = 3
    profile: str = "point"
    span: tuple[float, float] | None = None   # tangential extent of half-sine-y


@dataclass
class ProbeConfig:
    position: tuple[float, float]
    field: str = "ez"
    cadence: int = 1


@dataclass
class RunConfig:
    family: str = "trapezoid-second-order"
    n_steps: int | None = None
    t_end: float | None = None
    dt: float | None = None
    safety: float | None = None
    energy_cadence: int = 100
    snapshot_steps: tuple[int, ...] = ()
    source_off_step: int | None = None
    sar_norm: str | None = None
    out_dir: str | None = None


@dataclass
class ScenarioConfig:
    blocks: list = field(default_factory=list)
    interfaces: list = field(default_factory=list)
    boundaries: dict = field(default_factory=dict)   # block id -> {edge: kind}
    sources: list = field(default_factory=list)
    probes: list = field(default_factory=list)
    run: RunConfig = field(default_factory=RunConfig)


# ---------------------------------------------------------------------------
# Parsing

def _parse_float(raw: str, where: str, errors: list) -> float | None:
    try:
        return float(raw)
    except ValueError:
        errors.append(f"{where}: not a number: {raw!r}")
        return None


def _parse_int(raw: str, where: str, errors: list) -> int | None:
    try:
        return int(raw, 10)
    except ValueError:
        pass
    try:
        value = float(raw)
    except ValueError:
        errors.append(f"{where}: not an integer: {raw!r}")
        return None
    if not value.is_integer():
        errors.append(f"{where}: not an integer: {raw!r}")
        return None
    return int(value)


def _parse_pair(raw: str, where: str, errors: list):
    parts = raw.split()
    if len(parts) != 2:
        errors.append(f"{where}: expected two numbers, got {raw!r}")
        return None
    x = _parse_float(parts[0], where, errors)
    y = _parse_float(parts[1], where, errors)
    if x is None or y is None:
        return None
    return (x, y)


def _check_keys(items: dict, allowed: set, required: set, where: str,
                errors: list) -> bool:
    ok = True
    for key in items:
        if key not in allowed:
            errors.append(f"{where}: unknown key {key!r}")
            ok = False
    for key in required:
        if key not in items:
            errors.append(f"{where}: missing required key {key!r}")
            ok = False
    return ok


def parse_config(text: str) -> ScenarioConfig:
    """Parse INI text into a ScenarioConfig; raises ConfigError on any
    syntactic or structural problem (all problems listed at once)."""
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                   comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([str(exc)]) from None

    errors: list[str] = []
    cfg = ScenarioConfig()
    for section in cp.sections():
        items = dict(cp[section])
        if section == "run":
            _parse_run_section(items, cfg, errors)
        elif section == "boundary":
            _parse_boundary_section(items, cfg, errors)
        elif section.startswith("block."):
            _parse_block_section(section, items, cfg, errors)
        elif section.startswith("interface."):
            _parse_interface_section(section, items, cfg, errors)
        elif section.startswith("source."):
            _parse_source_section(section, items, cfg, errors)
        elif section.startswith("probe."):
            _parse_probe_section(section, items, cfg, errors)
        else:
            errors.append(f"[{section}]: unknown section")
    if not cp.sections():
        errors.append("empty config: no sections found")
    if errors:
        raise ConfigError(errors)
    return cfg


def _parse_run_section(items, cfg, errors):
    where = "[run]"
    allowed = {"family", "n_steps", "t_end", "dt", "safety", "energy_cadence",
               "snapshot_steps", "source_off_step", "sar_norm", "out_dir"}
    _check_keys(items, allowed, set(), where, errors)
    run = cfg.run
    if "family" in items:
        run.family = items["family"].strip()
    for key in ("n_steps", "source_off_step"):
        if key in items:
            setattr(run, key, _parse_int(items[key], f"{where} {key}", errors))
    for key in ("t_end", "dt", "safety"):
        if key in items:
            setattr(run, key, _parse_float(items[key], f"{where} {key}", errors))
    if "energy_cadence" in items:
        value = _parse_int(items["energy_cadence"], f"{where} energy_cadence", errors)
        if value is not None:
            run.energy_cadence = value
    if "snapshot_steps" in items:
        steps = []
        for part in items["snapshot_steps"].split(","):
            part = part.strip()
            if not part:
                continue
            value = _parse_int(part, f"{where} snapshot_steps", errors)
            if value is not None:
                steps.append(value)
        run.snapshot_steps = tuple(steps)
    if "sar_norm" in items:
        run.sar_norm = items["sar_norm"].strip()
    if "out_dir" in items:
        run.out_dir = items["out_dir"].strip()


def _parse_boundary_section(items, cfg, errors):
    for key, value in items.items():
        parts = key.rsplit(".", 1)
        if len(parts) != 2:
            errors.append(f"[boundary] {key}: expected '<block>.<edge>'")
            continue
        block_id, edge = parts
        cfg.boundaries.setdefault(block_id, {})[edge] = value.strip()


def _parse_block_section(section, items, cfg, errors):
    where = f"[{section}]"
    block_id = section[len("block."):]
    if not block_id:
        errors.append(f"{where}: empty block id")
        return
    if not _check_keys(items, {"origin", "nx", "ny", "h", "material"},
                       {"origin", "nx", "ny", "h"}, where, errors):
        return
    origin = _parse_pair(items["origin"], f"{where} origin", errors)
    nx = _parse_int(items["nx"], f"{where} nx", errors)
    ny = _parse_int(items["ny"], f"{where} ny", errors)
    h = _parse_float(items["h"], f"{where} h", errors)
    if None in (origin, nx, ny, h):
        return
    cfg.blocks.append(BlockConfig(id=block_id, origin=origin, nx=nx, ny=ny,
                                  h=h, material=items.get("material", "vacuum").strip()))


def _parse_interface_section(section, items, cfg, errors):
    where = f"[{section}]"
    if not _check_keys(items, {"coarse", "fine", "edge_of_coarse", "ratio"},
                       {"coarse", "fine", "edge_of_coarse", "ratio"},
                       where, errors):
        return
    ratio = _parse_int(items["ratio"], f"{where} ratio", errors)
    if ratio is None:
        return
    cfg.interfaces.append(InterfaceConfig(
        coarse=items["coarse"].strip(), fine=items["fine"].strip(),
        edge_of_coarse=items["edge_of_coarse"].strip(), ratio=ratio))


def _parse_source_section(section, items, cfg, errors):
    where = f"[{section}]"
    allowed = {"kind", "position", "amplitude", "f_bw", "tau", "t0", "f0",
               "n_ramp_periods", "profile", "span"}
    if not _check_keys(items, allowed, {"kind", "position"}, where, errors):
        return
    position = _parse_pair(items["position"], f"{where} position", errors)
    if position is None:
        return
    src = SourceConfig(kind=items["kind"].strip(), position=position)
    if "amplitude" in items:
        value = _parse_float(items["amplitude"], f"{where} amplitude", errors)
        if value is not None:
            src.amplitude = value
    for key in ("f_bw", "tau", "t0", "f0"):
        if key in items:
            setattr(src, key, _parse_float(items[key], f"{where} {key}", errors))
    if "n_ramp_periods" in items:
        value = _parse_int(items["n_ramp_periods"], f"{where} n_ramp_periods", errors)
        if value is not None:
            src.n_ramp_periods = value
    if "profile" in items:
        src.profile = items["profile"].strip()
    if "span" in items:
        src.span = _parse_pair(items["span"], f"{where} span", errors)
    cfg.sources.append(src)


def _parse_probe_section(section, items, cfg, errors):
    where = f"[{section}]"
    if not _check_keys(items, {"position", "field", "cadence"}, {"position"},
                       where, errors):
        return
    position = _parse_pair(items["position"], f"{where} position", errors)
    if position is None:
        return
    probe = ProbeConfig(position=position)
    if "field" in items:
        probe.field = items["field"].strip()
    if "cadence" in items:
        value = _parse_int(items["cadence"], f"{where} cadence", errors)
        if value is not None:
            probe.cadence = value
    cfg.probes.append(probe)


# ---------------------------------------------------------------------------
# Serialization

def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: ScenarioConfig) -> str:
    """Canonical INI text; parse_config(serialize_config(c)) == c."""
    out = io.StringIO()

    def emit(section, pairs):
        out.write(f"[{section}]\n")
        for key, value in pairs:
            out.write(f"{key} = {value}\n")
        out.write("\n")

    run = cfg.run
    pairs = [("family", run.family)]
    for key in ("n_steps", "t_end", "dt", "safety"):
        value = getattr(run, key)
        if value is not None:
            pairs.append((key, _fmt(value)))
    pairs.append(("energy_cadence", run.energy_cadence))
    if run.snapshot_steps:
        pairs.append(("snapshot_steps", ",".join(str(s) for s in run.snapshot_steps)))
    if run.source_off_step is not None:
        pairs.append(("source_off_step", run.source_off_step))
    if run.sar_norm is not None:
        pairs.append(("sar_norm", run.sar_norm))
    if run.out_dir is not None:
        pairs.append(("out_dir", run.out_dir))
    emit("run", pairs)

    for b in cfg.blocks:
        emit(f"block.{b.id}", [
            ("origin", f"{_fmt(b.origin[0])} {_fmt(b.origin[1])}"),
            ("nx", b.nx), ("ny", b.ny), ("h", _fmt(b.h)),
            ("material", b.material)])
    for k, c in enumerate(cfg.interfaces):
        emit(f"interface.{k}", [
            ("coarse", c.coarse), ("fine", c.fine),
            ("edge_of_coarse", c.edge_of_coarse), ("ratio", c.ratio)])
    boundary_pairs = [(f"{bid}.{edge}", kind)
                      for bid, edges in cfg.boundaries.items()
                      for edge, kind in edges.items()]
    if boundary_pairs:
        emit("boundary", boundary_pairs)
    for k, s in enumerate(cfg.sources):
        pairs = [("kind", s.kind),
                 ("position", f"{_fmt(s.position[0])} {_fmt(s.position[1])}"),
                 ("amplitude", _fmt(s.amplitude))]
        for key in ("f_bw", "tau", "t0", "f0"):
            value = getattr(s, key)
            if value is not None:
                pairs.append((key, _fmt(value)))
        pairs.append(("n_ramp_periods", s.n_ramp_periods))
        pairs.append(("profile", s.profile))
        if s.span is not None:
            pairs.append(("span", f"{_fmt(s.span[0])} {_fmt(s.span[1])}"))
        emit(f"source.{k}", pairs)
    for k, p in enumerate(cfg.probes):
        emit(f"probe.{k}", [
            ("position", f"{_fmt(p.position[0])} {_fmt(p.position[1])}"),
            ("field", p.field), ("cadence", p.cadence)])
    return out.getvalue()


# ---------------------------------------------------------------------------
# Material specs

def _spec_kv(tokens, allowed, required, spec, list_keys=()):
    values = {}
    for token in tokens:
        if "=" not in token:
            raise InvalidArgument(f"material spec {spec!r}: expected key=value, got {token!r}")
        key, _, raw = token.partition("=")
        if key not in allowed:
            raise InvalidArgument(f"material spec {spec!r}: unknown key {key!r}")
        try:
            if key in list_keys:
                values[key] = tuple(float(p) for p in raw.split(",") if p)
            else:
                values[key] = float(raw)
        except ValueError:
            raise InvalidArgument(
                f"material spec {spec!r}: bad number for {key!r}: {raw!r}") from None
    for key in required:
        if key not in values:
            raise InvalidArgument(f"material spec {spec!r}: missing key {key!r}")
    return values


def _node_coords(origin, nx, ny, h):
    x = origin[0] + h * np.arange(nx + 1)
    y = origin[1] + h * np.arange(ny + 1)
    return np.meshgrid(x, y, indexing="ij")


def material_from_spec(spec: str, origin, nx: int, ny: int, h: float) -> MaterialMap:
    """Build the material arrays of one block from a one-line spec."""
    tokens = spec.split()
    if not tokens:
        raise InvalidArgument("empty material spec")
    name, args = tokens[0], tokens[1:]
    mats = vacuum_materials(nx, ny)

    if name == "vacuum":
        if args:
            raise InvalidArgument(f"material spec {spec!r}: vacuum takes no keys")
        return mats

    if name == "uniform":
        values = _spec_kv(args, {"eps_rel", "sigma_e", "density", "mu_rel"},
                          set(), spec)
        mats.eps_rel[:] = values.get("eps_rel", 1.0)
        mats.sigma_e[:] = values.get("sigma_e", 0.0)
        mats.density[:] = values.get("density", 1.0)
        return MaterialMap(eps_rel=mats.eps_rel, sigma_e=mats.sigma_e,
                           mu_rel=values.get("mu_rel", 1.0),
                           density=mats.density, pec_mask=mats.pec_mask)

    if name == "head-phantom":
        values = _spec_kv(args, {"cx", "cy", "a", "b"}, {"cx", "cy", "a", "b"}, spec)
        if values["a"] <= 0 or values["b"] <= 0:
            raise InvalidArgument(f"material spec {spec!r}: semi-axes must be positive")
        gx, gy = _node_coords(origin, nx, ny, h)
        r = np.sqrt(((gx - values["cx"]) / values["a"]) ** 2
                    + ((gy - values["cy"]) / values["b"]) ** 2)
        mats.density[:] = AIR_DENSITY
        lower = 0.0
        for tissue_name, upper in PHANTOM_LAYERS:
            tissue = TISSUES[tissue_name]
            inside = (r >= lower) & (r < upper) if lower else (r < upper)
            mats.eps_rel[inside] = tissue.eps_rel
            mats.sigma_e[inside] = tissue.sigma_e
            mats.density[inside] = tissue.density
            lower = upper
        return mats

    if name == "pec-posts":
        values = _spec_kv(args, {"radius", "pitch", "x0", "rows"},
                          {"radius", "pitch", "x0", "rows"}, spec,
                          list_keys=("rows",))
        radius, pitch = values["radius"], values["pitch"]
        if radius <= 0 or pitch <= 0:
            raise InvalidArgument(f"material spec {spec!r}: radius and pitch must be positive")
        gx, gy = _node_coords(origin, nx, ny, h)
        x_lo, x_hi = origin[0] - radius, origin[0] + nx * h + radius
        k_lo = math.ceil((x_lo - values["x0"]) / pitch)
        k_hi = math.floor((x_hi - values["x0"]) / pitch)
        r2 = radius * radius
        for y_row in values["rows"]:
            for k in range(k_lo, k_hi + 1):
                cx = values["x0"] + k * pitch
                mats.pec_mask |= (gx - cx) ** 2 + (gy - y_row) ** 2 < r2
        return mats

    raise InvalidArgument(f"unknown material spec {name!r}")


# ---------------------------------------------------------------------------
# Validation and assembly

def _position_in_block(position, b: BlockConfig) -> bool:
    tol = 1e-9 * b.h
    return (b.origin[0] - tol <= position[0] <= b.origin[0] + b.nx * b.h + tol
            and b.origin[1] - tol <= position[1] <= b.origin[1] + b.ny * b.h + tol)


def _position_in_some_block(cfg, position) -> bool:
    return any(_position_in_block(position, b) for b in cfg.blocks)


def validate_config(cfg: ScenarioConfig) -> list:
    """Every violation found, with config locations; empty means valid."""
    problems: list[str] = []
    _validate_run(cfg.run, problems)

    ids = [b.id for b in cfg.blocks]
    if not cfg.blocks:
        problems.append("config defines no blocks")
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        problems.append(f"duplicate block id {dup!r}")

    blocks_ok = True
    for b in cfg.blocks:
        where = f"[block.{b.id}]"
        if b.nx < 2 or b.ny < 2:
            problems.append(f"{where}: nx and ny must be >= 2, got {b.nx}x{b.ny}")
            blocks_ok = False
        if not b.h > 0:
            problems.append(f"{where}: h must be positive, got {b.h}")
            blocks_ok = False
        try:
            material_from_spec(b.material, b.origin, 2, 2, b.h if b.h > 0 else 1.0)
        except InvalidArgument as exc:
            problems.append(f"{where}: {exc}")
            blocks_ok = False
    if cfg.run.family not in FAMILIES:
        blocks_ok = False   # system build would fail on operators

    interface_edges = {}
    for k, c in enumerate(cfg.interfaces):
        where = f"[interface.{k}]"
        for bid in (c.coarse, c.fine):
            if bid not in ids:
                problems.append(f"{where}: unknown block {bid!r}")
                blocks_ok = False
        if c.edge_of_coarse not in EDGES:
            problems.append(f"{where}: unknown edge {c.edge_of_coarse!r}")
            blocks_ok = False
        if c.ratio < 1:
            problems.append(f"{where}: ratio must be >= 1, got {c.ratio}")
            blocks_ok = False
        if blocks_ok:
            opposite = {"W": "E", "E": "W", "S": "N", "N": "S"}[c.edge_of_coarse]
            interface_edges[(c.coarse, c.edge_of_coarse)] = k
            interface_edges[(c.fine, opposite)] = k

    for bid, edges in cfg.boundaries.items():
        if bid not in ids:
            problems.append(f"[boundary] {bid}: unknown block")
            continue
        for edge, kind in edges.items():
            where = f"[boundary] {bid}.{edge}"
            if edge not in EDGES:
                problems.append(f"{where}: unknown edge {edge!r}")
            elif kind not in CONFIG_BOUNDARY_KINDS:
                problems.append(
                    f"{where}: unknown boundary kind {kind!r} "
                    f"(one of {', '.join(CONFIG_BOUNDARY_KINDS)})")
            elif (bid, edge) in interface_edges:
                problems.append(
                    f"{where}: edge is coupled by interface "
                    f"{interface_edges[(bid, edge)]}; cannot assign {kind!r}")

    for k, s in enumerate(cfg.sources):
        where = f"[source.{k}]"
        if s.kind not in SOURCE_KINDS:
            problems.append(f"{where}: unknown kind {s.kind!r}")
        elif s.kind == "gaussian":
            if s.f_bw is None and s.tau is None:
                problems.append(f"{where}: gaussian needs f_bw or tau")
            if s.f_bw is not None and not s.f_bw > 0:
                problems.append(f"{where}: f_bw must be positive")
            if s.tau is not None and not s.tau > 0:
                problems.append(f"{where}: tau must be positive")
        else:
            if s.f0 is None or not s.f0 > 0:
                problems.append(f"{where}: ramped-sine needs positive f0")
            if s.n_ramp_periods < 1:
                problems.append(f"{where}: n_ramp_periods must be >= 1")
        if s.profile not in SOURCE_PROFILES:
            problems.append(f"{where}: unknown profile {s.profile!r}")
        if s.span is not None and not s.span[0] < s.span[1]:
            problems.append(f"{where}: span must be increasing")
        if not math.isfinite(s.amplitude):
            problems.append(f"{where}: amplitude must be finite")
        if cfg.blocks and not _position_in_some_block(cfg, s.position):
            problems.append(f"{where}: position {s.position} lies in no block")

    for k, p in enumerate(cfg.probes):
        where = f"[probe.{k}]"
        if p.field != "ez":
            problems.append(f"{where}: unknown field {p.field!r} (only 'ez')")
        if p.cadence < 1:
            problems.append(f"{where}: cadence must be >= 1, got {p.cadence}")
        if cfg.blocks and not _position_in_some_block(cfg, p.position):
            problems.append(f"{where}: position {p.position} lies in no block")

    if blocks_ok and cfg.blocks:
        try:
            system = build_system(cfg)
        except (InvalidArgument, KeyError) as exc:
            problems.append(f"system assembly failed: {exc}")
        else:
            problems.extend(validate_system(system))
    return problems


def _validate_run(run: RunConfig, problems: list) -> None:
    if run.family not in FAMILIES:
        problems.append(
            f"[run] family: unknown family {run.family!r} "
            f"(one of {', '.join(FAMILIES)})")
    if (run.dt is None) == (run.safety is None):
        state = "both" if run.dt is not None else "neither"
        problems.append(f"[run]: exactly one of dt and safety must be set ({state} given)")
    if run.dt is not None and not run.dt > 0:
        problems.append(f"[run] dt: must be positive, got {run.dt}")
    if run.safety is not None and not 0 < run.safety <= 1:
        problems.append(f"[run] safety: must be in (0, 1], got {run.safety}")
    if (run.n_steps is None) == (run.t_end is None):
        state = "both" if run.n_steps is not None else "neither"
        problems.append(f"[run]: exactly one of n_steps and t_end must be set ({state} given)")
    if run.n_steps is not None and run.n_steps < 1:
        problems.append(f"[run] n_steps: must be >= 1, got {run.n_steps}")
    if run.t_end is not None and not run.t_end > 0:
        problems.append(f"[run] t_end: must be positive, got {run.t_end}")
    if run.energy_cadence < 1:
        problems.append(f"[run] energy_cadence: must be >= 1, got {run.energy_cadence}")
    if any(s < 0 for s in run.snapshot_steps):
        problems.append("[run] snapshot_steps: steps must be >= 0")
    if run.source_off_step is not None and run.source_off_step < 0:
        problems.append(f"[run] source_off_step: must be >= 0, got {run.source_off_step}")
    if run.sar_norm is not None and run.sar_norm not in SAR_FIELD_NORMS:
        problems.append(
            f"[run] sar_norm: unknown norm {run.sar_norm!r} "
            f"(one of {', '.join(SAR_FIELD_NORMS)})")


def build_system(cfg: ScenarioConfig) -> SimSystem:
    """Assemble the multi-block system a validated config describes."""
    blocks = []
    for b in cfg.blocks:
        materials = material_from_spec(b.material, b.origin, b.nx, b.ny, b.h)
        blocks.append(build_block(b.id, b.origin, b.nx, b.ny, b.h,
                                  family=cfg.run.family, materials=materials))
    by_id = {b.id: b for b in blocks}
    couplings = [build_coupling(by_id[c.coarse], by_id[c.fine],
                                c.edge_of_coarse, c.ratio)
                 for c in cfg.interfaces]
    return SimSystem(blocks=blocks, interfaces=couplings,
                     boundaries=copy.deepcopy(cfg.boundaries))


def load_config(path) -> ScenarioConfig:
    """Read, parse, and fully validate a scenario file."""
    with open(path, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    problems = validate_config(cfg)
    if problems:
        raise ConfigError(problems)
    return cfg
