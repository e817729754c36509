from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Optional

from latticecft.errors import ConfigError

SUITE_NAMES = ("lattice", "cocycle", "fock", "vertex", "net2d", "braidcat", "classify")
BACKEND_CHOICES = ("auto", "rational", "quadratic", "float")


@dataclass(frozen=True)
class SpaceConfig:
    d_plus: int = 1
    d_minus: int = 1


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "auto"  # auto | rational | quadratic | float
    radicand: int = 0  # quadratic only
    tolerance: float = 1e-12
    precision: int = 53


@dataclass(frozen=True)
class GeneratorConfig:
    plus: tuple[str, ...] = ()
    minus: tuple[str, ...] = ()


@dataclass(frozen=True)
class LatticeConfig:
    r_squared: Optional[str] = None
    generators: tuple[GeneratorConfig, ...] = ()
    validate: bool = True


@dataclass(frozen=True)
class CutoffConfig:
    energy: int = 8
    series_order: int = 5
    box_radius: int = 3
    state_budget: Optional[int] = None


@dataclass(frozen=True)
class FockConfig:
    max_mode: int = 3
    bound_modes: int = 4


@dataclass(frozen=True)
class VertexConfig:
    # None: min(series_order, energy // 2)
    comm_order: Optional[int] = None
    primary_modes: tuple[int, ...] = (-2, -1, 0, 1, 2)
    locality_order: int = 4


@dataclass(frozen=True)
class Net2dConfig:
    energy: int = 6
    shift_radius: int = 1
    modes: tuple[int, ...] = (-2, -1, 0, 1, 2)
    character_level: int = 6
    field_order: int = 3


@dataclass(frozen=True)
class BraidConfig:
    r_squared_values: tuple[str, ...] = ("1", "2", "1/3", "sqrt(2)")
    radius: int = 4
    nu_samples: int = 5
    nu_points: int = 512
    seed: int = 0


@dataclass(frozen=True)
class ClassifyConfig:
    sample_radius: int = 3
    gauge_radius: int = 2


@dataclass(frozen=True)
class LoggingConfig:
    level: str = "WARNING"


@dataclass(frozen=True)
class ModelConfig:
    name: str = "model"
    space: SpaceConfig = SpaceConfig()
    backend: BackendConfig = BackendConfig()
    lattice: LatticeConfig = LatticeConfig()
    cutoffs: CutoffConfig = CutoffConfig()
    fock: FockConfig = FockConfig()
    vertex: VertexConfig = VertexConfig()
    net2d: Net2dConfig = Net2dConfig()
    braid: BraidConfig = BraidConfig()
    classify: ClassifyConfig = ClassifyConfig()
    logging: LoggingConfig = LoggingConfig()
    suites: tuple[str, ...] = SUITE_NAMES


def _get(d: dict[str, Any], key: str, default: Any) -> Any:
    value = d.get(key, default)
    return default if value is None else value


def _section(raw: dict[str, Any], key: str) -> dict[str, Any]:
    value = raw.get(key, {}) or {}
    if not isinstance(value, dict):
        raise ConfigError(f"section '{key}' must be a mapping, got {type(value).__name__}")
    return value


def _ints(value: Any, key: str) -> tuple[int, ...]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"'{key}' must be a list of integers")
    return tuple(int(v) for v in value)


def _tokens(value: Any, key: str) -> tuple[str, ...]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"'{key}' must be a list of scalar tokens")
    return tuple(str(v) for v in value)


def _generators(items: Any) -> tuple[GeneratorConfig, ...]:
    if not isinstance(items, list):
        raise ConfigError("lattice.generators must be a list")
    out: list[GeneratorConfig] = []
    for idx, item in enumerate(items):
        if not isinstance(item, dict):
            raise ConfigError(f"lattice.generators[{idx}] must have 'plus' and 'minus' lists")
        out.append(
            GeneratorConfig(
                plus=_tokens(_get(item, "plus", []), f"lattice.generators[{idx}].plus"),
                minus=_tokens(_get(item, "minus", []), f"lattice.generators[{idx}].minus"),
            )
        )
    return tuple(out)


def _suites(value: Any) -> tuple[str, ...]:
    names = [value] if isinstance(value, str) else list(value)
    if "all" in names:
        return SUITE_NAMES
    unknown = [n for n in names if n not in SUITE_NAMES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown} (expected {', '.join(SUITE_NAMES)} or all)")
    return tuple(n for n in SUITE_NAMES if n in names)


def select_suites(names: Optional[list[str]], default: tuple[str, ...]) -> tuple[str, ...]:
    return _suites(names) if names else default


def _validate(config: ModelConfig) -> None:
    """Cross-field window checks; every series and mode must fit inside its energy cutoff."""
    cut = config.cutoffs
    problems: list[str] = []
    if cut.energy < 0 or cut.series_order < 0:
        problems.append(f"cutoffs must be non-negative (energy={cut.energy}, series_order={cut.series_order})")
    if cut.box_radius < 1:
        problems.append(f"cutoffs.box_radius={cut.box_radius} must be at least 1")
    if cut.series_order > cut.energy:
        problems.append(f"cutoffs.series_order={cut.series_order} exceeds cutoffs.energy={cut.energy}")
    comm = config.vertex.comm_order
    if comm is not None and not 0 <= comm <= cut.energy // 2:
        problems.append(f"vertex.comm_order={comm} outside 0..energy//2={cut.energy // 2}")
    for key, value in (("fock.max_mode", config.fock.max_mode), ("fock.bound_modes", config.fock.bound_modes)):
        if not 0 <= value <= cut.energy:
            problems.append(f"{key}={value} outside 0..cutoffs.energy={cut.energy}")
    if any(abs(m) > cut.energy for m in config.vertex.primary_modes):
        problems.append(f"vertex.primary_modes {list(config.vertex.primary_modes)} leave |m| <= {cut.energy}")
    net = config.net2d
    if net.energy < 0 or net.shift_radius < 0:
        problems.append(f"net2d.energy={net.energy} and net2d.shift_radius={net.shift_radius} must be non-negative")
    if any(abs(m) > net.energy for m in net.modes):
        problems.append(f"net2d.modes {list(net.modes)} leave |m| <= {net.energy}")
    if config.braid.radius < 1 or config.braid.nu_points < 2:
        problems.append(f"braid.radius={config.braid.radius} must be >= 1 and braid.nu_points={config.braid.nu_points} >= 2")
    if problems:
        raise ConfigError("; ".join(problems))


def load_config(path: Path) -> ModelConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")

    try:
        import yaml  # type: ignore
    except Exception as exc:  # pragma: no cover
        raise ConfigError("PyYAML is required to read model configs") from exc

    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path} must hold a mapping at the top level")

    space_raw = _section(raw, "space")
    backend_raw = _section(raw, "backend")
    lattice_raw = _section(raw, "lattice")
    cutoffs_raw = _section(raw, "cutoffs")
    fock_raw = _section(raw, "fock")
    vertex_raw = _section(raw, "vertex")
    net2d_raw = _section(raw, "net2d")
    braid_raw = _section(raw, "braid")
    classify_raw = _section(raw, "classify")
    logging_raw = _section(raw, "logging")

    kind = str(_get(backend_raw, "kind", "auto")).lower()
    if kind not in BACKEND_CHOICES:
        raise ConfigError(f"unknown backend '{kind}' (expected one of {', '.join(BACKEND_CHOICES)})")

    r_squared = lattice_raw.get("r_squared")
    budget = cutoffs_raw.get("state_budget")
    comm_order = vertex_raw.get("comm_order")

    try:
        config = ModelConfig(
            name=str(_get(raw, "name", path.stem)),
            space=SpaceConfig(
                d_plus=int(_get(space_raw, "d_plus", 1)),
                d_minus=int(_get(space_raw, "d_minus", 1)),
            ),
            backend=BackendConfig(
                kind=kind,
                radicand=int(_get(backend_raw, "radicand", 0)),
                tolerance=float(_get(backend_raw, "tolerance", 1e-12)),
                precision=int(_get(backend_raw, "precision", 53)),
            ),
            lattice=LatticeConfig(
                r_squared=None if r_squared is None else str(r_squared),
                generators=_generators(_get(lattice_raw, "generators", [])),
                validate=bool(_get(lattice_raw, "validate", True)),
            ),
            cutoffs=CutoffConfig(
                energy=int(_get(cutoffs_raw, "energy", 8)),
                series_order=int(_get(cutoffs_raw, "series_order", 5)),
                box_radius=int(_get(cutoffs_raw, "box_radius", 3)),
                state_budget=None if budget is None else int(budget),
            ),
            fock=FockConfig(
                max_mode=int(_get(fock_raw, "max_mode", 3)),
                bound_modes=int(_get(fock_raw, "bound_modes", 4)),
            ),
            vertex=VertexConfig(
                comm_order=None if comm_order is None else int(comm_order),
                primary_modes=_ints(_get(vertex_raw, "primary_modes", [-2, -1, 0, 1, 2]), "vertex.primary_modes"),
                locality_order=int(_get(vertex_raw, "locality_order", 4)),
            ),
            net2d=Net2dConfig(
                energy=int(_get(net2d_raw, "energy", 6)),
                shift_radius=int(_get(net2d_raw, "shift_radius", 1)),
                modes=_ints(_get(net2d_raw, "modes", [-2, -1, 0, 1, 2]), "net2d.modes"),
                character_level=int(_get(net2d_raw, "character_level", 6)),
                field_order=int(_get(net2d_raw, "field_order", 3)),
            ),
            braid=BraidConfig(
                r_squared_values=_tokens(
                    _get(braid_raw, "r_squared_values", ["1", "2", "1/3", "sqrt(2)"]), "braid.r_squared_values"
                ),
                radius=int(_get(braid_raw, "radius", 4)),
                nu_samples=int(_get(braid_raw, "nu_samples", 5)),
                nu_points=int(_get(braid_raw, "nu_points", 512)),
                seed=int(_get(braid_raw, "seed", 0)),
            ),
            classify=ClassifyConfig(
                sample_radius=int(_get(classify_raw, "sample_radius", 3)),
                gauge_radius=int(_get(classify_raw, "gauge_radius", 2)),
            ),
            logging=LoggingConfig(
                level=str(_get(logging_raw, "level", "WARNING")).upper(),
            ),
            suites=_suites(_get(raw, "suites", ["all"])),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad value in {path}: {exc}") from exc
    _validate(config)
    return config


def config_echo(config: ModelConfig) -> dict[str, Any]:
    return asdict(config)
