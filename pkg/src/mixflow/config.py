"""Run configuration: a sectioned ``key = value`` file read with configparser.

Unknown sections and keys are rejected by name. Lists are comma separated.
Every field has a default, so an empty file is a valid configuration.
"""
from __future__ import annotations

import configparser
import hashlib
import io
import typing
from dataclasses import asdict, dataclass, field, fields, replace

from .grid import Grid
from .kinetics import KineticsSpec
from .thermo import ColdPressureParams, MixtureSpec
from .transport import VISCOSITY_FAMILIES, TransportSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridConfig:
    dim: int = 1
    N: tuple = (128,)
    L: tuple = (1.0,)
    order: int = 2


@dataclass(frozen=True)
class MixtureConfig:
    m: tuple = (1.0, 2.0)
    e_st: tuple = (0.0, 0.0)
    s_st: tuple = (0.0, 0.0)
    c_v: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    gamma_minus: float = 2.0
    gamma_plus: float = 2.0


@dataclass(frozen=True)
class TransportConfig:
    mu_family: str = "linear"
    mu0: float = 0.0
    mu1: float = 1.0
    mu_prime_lower: float = 0.5
    kappa0: float = 0.1
    kappa0_lower: float = 0.01
    kappa0_upper: float = 10.0
    alpha: float = 2.0
    d0: float = 0.1
    d0_lower: float = 0.01
    d0_upper: float = 10.0
    # "coupled" or a number; a number decouples nu from mu and fails the audit
    nu: str = "coupled"


@dataclass(frozen=True)
class KineticsConfig:
    kind: str = "null"
    donor: int = 0
    acceptor: int = 1
    rate: float = 1.0
    omega_lower: float = 10.0
    omega_upper: float = 10.0


@dataclass(frozen=True)
class InitialConfig:
    kind: str = "perturbed"
    rho0: float = 2.0
    theta0: float = 1.0
    u0: tuple = (0.0,)
    Y0: tuple = (0.5, 0.5)
    amp_rho: float = 0.1
    amp_theta: float = 0.1
    amp_u: float = 0.1
    amp_Y: float = 0.1
    mode: int = 1
    random_phases: bool = False
    layer_width: float = 0.05
    Y_low: float = 0.1
    Y_high: float = 0.9


@dataclass(frozen=True)
class RunSection:
    t_end: float = 0.2
    cfl: float = 0.9
    # steps per fixed-dt segment; 0 keeps dt until the CFL limit drops below it
    dt_segment: int = 0
    cadence: int = 100
    snapshot_cadence: int = 0
    output_dir: str = "output"
    seed: int = 0
    max_steps: int = 0
    rho_floor: float = 1e-10
    extended: bool = False
    sign_tol: float = 1e-12


@dataclass(frozen=True)
class AuditConfig:
    rho_min: float = 1e-3
    rho_max: float = 1e3
    samples: int = 100
    theta_min: float = 0.1
    theta_max: float = 10.0
    admissibility_samples: int = 2000


@dataclass(frozen=True)
class MMSConfig:
    levels: int = 3
    N0: int = 32
    t_end: float = 0.05
    cfl: float = 0.5
    time_levels: int = 3
    time_N: int = 16
    # first time step of the temporal study, in units of h^2
    time_dt_scale: float = 1.0


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    mixture: MixtureConfig = field(default_factory=MixtureConfig)
    transport: TransportConfig = field(default_factory=TransportConfig)
    kinetics: KineticsConfig = field(default_factory=KineticsConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    run: RunSection = field(default_factory=RunSection)
    audit: AuditConfig = field(default_factory=AuditConfig)
    mms: MMSConfig = field(default_factory=MMSConfig)

    # -- derived objects
    def make_grid(self) -> Grid:
        g = self.grid
        return Grid(g.dim, g.N if len(g.N) == g.dim else g.N * g.dim,
                    g.L if len(g.L) == g.dim else g.L * g.dim)

    def mixture_spec(self) -> MixtureSpec:
        m = self.mixture
        cold = ColdPressureParams(m.c1, m.c2, m.gamma_minus, m.gamma_plus)
        return MixtureSpec(m.m, m.e_st, m.s_st, m.c_v, cold)

    def transport_spec(self) -> TransportSpec:
        t = self.transport
        visc = VISCOSITY_FAMILIES[t.mu_family](t.mu0, t.mu1)
        nu_constant = None if t.nu == "coupled" else float(t.nu)
        return TransportSpec(visc, t.mu_prime_lower, t.kappa0, t.kappa0_lower, t.kappa0_upper,
                             t.alpha, t.d0, t.d0_lower, t.d0_upper, nu_constant)

    def kinetics_spec(self) -> KineticsSpec:
        return KineticsSpec(**asdict(self.kinetics))

    def to_text(self) -> str:
        return dump_config(self)

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]

    def with_run(self, **changes) -> "RunConfig":
        return replace(self, run=replace(self.run, **changes))


SECTIONS = {f.name: f.default_factory for f in fields(RunConfig)}


def _parse_value(raw: str, kind, where: str):
    raw = raw.strip()
    try:
        if kind is bool:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is tuple:
            parts = [p for p in raw.replace("(", "").replace(")", "").split(",") if p.strip()]
            return tuple(float(p) if any(c in p for c in ".eE") else int(p) for p in parts)
        return raw
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r} as {kind.__name__}") from None


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) if isinstance(x, float) else str(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _field_types(cls) -> dict:
    hints = typing.get_type_hints(cls)
    return {f.name: hints[f.name] for f in fields(cls)}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    sections = {}
    for name in cp.sections():
        if name not in SECTIONS:
            raise ConfigError(f"{source}: unknown section [{name}]")
        cls = type(SECTIONS[name]())
        types = _field_types(cls)
        values = {}
        for key, raw in cp.items(name):
            if key not in types:
                raise ConfigError(f"{source}: unknown key {key!r} in section [{name}]")
            values[key] = _parse_value(raw, types[key], f"{source} [{name}] {key}")
        sections[name] = cls(**values)
    cfg = RunConfig(**sections)
    validate_config(cfg)
    return cfg


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read(), str(path))


def dump_config(cfg: RunConfig) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    for name in SECTIONS:
        section = getattr(cfg, name)
        cp[name] = {f.name: _format_value(getattr(section, f.name)) for f in fields(section)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def validate_config(cfg: RunConfig) -> RunConfig:
    """Type-level validation; structural hypotheses are left to the audit."""
    def fail(msg):
        raise ConfigError(msg)

    g = cfg.grid
    if g.dim not in (1, 2, 3):
        fail("grid dim must be 1, 2 or 3")
    if len(g.N) not in (1, g.dim) or len(g.L) not in (1, g.dim):
        fail("grid N and L need one entry or one per axis")
    if g.order not in (2, 4):
        fail("grid order must be 2 or 4")
    try:
        cfg.make_grid()
        spec = cfg.mixture_spec()
    except ValueError as exc:
        fail(str(exc))
    n = spec.n
    if cfg.transport.mu_family not in VISCOSITY_FAMILIES:
        fail(f"unknown mu_family {cfg.transport.mu_family!r}")
    if cfg.transport.nu != "coupled":
        try:
            float(cfg.transport.nu)
        except ValueError:
            fail("transport nu must be 'coupled' or a number")
    try:
        cfg.transport_spec()
        kin = cfg.kinetics_spec()
    except ValueError as exc:
        fail(str(exc))
    if kin.kind == "pairwise_exchange" and max(kin.donor, kin.acceptor) >= n:
        fail("kinetics species index out of range")
    ic = cfg.initial
    if ic.kind not in ("perturbed", "mixing_layer", "manufactured"):
        fail(f"unknown initial condition kind {ic.kind!r}")
    if len(ic.Y0) != n:
        fail("initial Y0 needs one entry per species")
    if len(ic.u0) not in (1, g.dim):
        fail("initial u0 needs one entry or one per axis")
    if not (ic.rho0 > 0 and ic.theta0 > 0):
        fail("initial rho0 and theta0 must be positive")
    r = cfg.run
    if not r.t_end > 0:
        fail("t_end must be positive")
    if not 0 < r.cfl <= 1:
        fail("cfl must lie in (0, 1]")
    if r.cadence < 1:
        fail("cadence must be at least 1")
    if r.snapshot_cadence < 0 or r.max_steps < 0 or r.dt_segment < 0:
        fail("snapshot_cadence, max_steps and dt_segment must be nonnegative")
    mm = cfg.mms
    if mm.levels < 3 or mm.time_levels < 3:
        fail("need >= 3 levels")
    if mm.N0 < 4 or mm.time_N < 4 or not (mm.t_end > 0 and 0 < mm.cfl <= 1 and mm.time_dt_scale > 0):
        fail("mms needs N >= 4, t_end > 0, cfl in (0, 1] and time_dt_scale > 0")
    a = cfg.audit
    if a.samples < 2 or not (0 < a.rho_min < a.rho_max) or not (0 < a.theta_min < a.theta_max):
        fail("audit needs samples >= 2 and positive increasing ranges")
    return cfg
