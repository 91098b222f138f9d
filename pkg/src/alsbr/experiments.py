"""Parameter sweeps, figure datasets and the text config format.

Config files are INI-style (``configparser``)::

    [system]
    gamma_max = 30 dB
    gamma_p = 10 dB
    alpha = 3

    [geometry]
    d_sr = 1
    d_rd = 1
    d_sp = 1:20:1          # start:stop:step, inclusive, or a comma list
    d_rp = 10, 4.64, 2.93

    [schemes]
    schemes = alsbr, cubr, cbr

    [simulation]
    enabled = false
    slots = 1000000
    seed = 2017

    [solver]
    rate_tolerance = 1e-9

    [output]
    path = sweep.csv

SNR budgets must carry an explicit ``dB`` or ``linear`` suffix; conversion
to linear happens here and nowhere else.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
import math
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy

from . import __version__
from .channel import NetworkGeometry, SystemParams, db_to_linear, derive_link_statistics
from .errors import DomainError, SolverError
from .montecarlo import SimulationConfig, simulate_alsbr, simulate_cbr, simulate_cubr
from .rates import DEFAULT_POLICY, BranchPolicy, HopPair, rate_cbr, rate_cubr
from .solver import DEFAULT_SOLVER, SolverSpec, solve_rho

OUTPUT_DIR_ENV = "ALSBR_OUTPUT_DIR"
SCHEMES = ("alsbr", "cubr", "cbr")

# conditions of the published evaluation
BASELINE_GAMMA_MAX_DB = 30.0
BASELINE_GAMMA_P_DB = 10.0
BASELINE_ALPHA = 3.0
BASELINE_D_RP = (10.0, 4.64, 2.93)
FIGURE_D_SP = tuple(sorted({float(v) for v in range(1, 21)} | {2.93, 4.64}))
FIGURE_D_SP_RATIO = (0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0)
FIGURE_COLUMNS = {
    2: ("d_sp", "d_rp", "rate_alsbr"),
    3: ("d_sp", "d_rp", "rho", "log2_rho"),
    4: ("d_sp", "d_rp", "rate_alsbr", "rate_cubr", "ratio_alsbr_cubr"),
    5: ("d_sp_over_d_rp", "d_sp", "d_rp", "rate_alsbr", "rate_cbr", "ratio_alsbr_cbr"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    gamma_max_db: float = BASELINE_GAMMA_MAX_DB
    gamma_p_db: float = BASELINE_GAMMA_P_DB
    alpha: float = BASELINE_ALPHA
    d_sr: float = 1.0
    d_rd: float = 1.0
    d_sp: Tuple[float, ...] = FIGURE_D_SP
    d_rp: Tuple[float, ...] = BASELINE_D_RP
    d_sp_ratio: Optional[Tuple[float, ...]] = None
    schemes: Tuple[str, ...] = SCHEMES
    monte_carlo: bool = False
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    solver: SolverSpec = DEFAULT_SOLVER
    policy: BranchPolicy = DEFAULT_POLICY
    output: Optional[str] = None

    def __post_init__(self):
        if not self.d_rp:
            raise DomainError("d_rp list must be nonempty")
        if self.d_sp_ratio is None and not self.d_sp:
            raise DomainError("d_sp sweep must be nonempty")
        if self.d_sp_ratio is not None and not self.d_sp_ratio:
            raise DomainError("d_sp/d_rp sweep must be nonempty")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown or not self.schemes:
            raise DomainError(f"schemes must be a nonempty subset of {SCHEMES}, got {self.schemes}")
        self.system()
        for d_sp, d_rp in self.points():
            NetworkGeometry(d_sr=self.d_sr, d_rd=self.d_rd, d_sp=d_sp, d_rp=d_rp)

    def system(self) -> SystemParams:
        return SystemParams(db_to_linear(self.gamma_max_db), db_to_linear(self.gamma_p_db), self.alpha)

    def points(self) -> List[Tuple[float, float]]:
        """(d_sp, d_rp) pairs in sweep order: outer loop d_rp, inner loop d_sp."""
        out = []
        for d_rp in self.d_rp:
            if self.d_sp_ratio is not None:
                out.extend((r * d_rp, d_rp) for r in self.d_sp_ratio)
            else:
                out.extend((d_sp, d_rp) for d_sp in self.d_sp)
        return out

    def describe(self) -> List[Tuple[str, str]]:
        sim = self.simulation
        items = [
            ("gamma_max", f"{self.gamma_max_db!r} dB"),
            ("gamma_p", f"{self.gamma_p_db!r} dB"),
            ("alpha", repr(self.alpha)),
            ("d_sr", repr(self.d_sr)),
            ("d_rd", repr(self.d_rd)),
            ("d_rp", ", ".join(map(repr, self.d_rp))),
        ]
        if self.d_sp_ratio is not None:
            items.append(("d_sp_over_d_rp", ", ".join(map(repr, self.d_sp_ratio))))
        else:
            items.append(("d_sp", ", ".join(map(repr, self.d_sp))))
        items += [
            ("schemes", ", ".join(self.schemes)),
            ("monte_carlo", str(self.monte_carlo).lower()),
            ("slots", str(sim.slots)),
            ("seed", str(sim.seed)),
            ("rate_tolerance", repr(self.solver.rate_tolerance)),
            ("equality_tolerance", repr(self.policy.equality_tolerance)),
        ]
        return items


@dataclass(frozen=True)
class SweepRow:
    d_sp: float
    d_rp: float
    rho: float
    log2_rho: float
    rate_alsbr: float
    rate_cubr: float
    rate_cbr: float
    ratio_alsbr_cubr: float
    ratio_alsbr_cbr: float
    mc_alsbr: float = math.nan
    mc_alsbr_stderr: float = math.nan
    mc_cubr: float = math.nan
    mc_cubr_stderr: float = math.nan
    mc_cbr: float = math.nan
    mc_cbr_stderr: float = math.nan
    status: str = "ok"

    @property
    def d_sp_over_d_rp(self) -> float:
        return self.d_sp / self.d_rp


CSV_COLUMNS = (
    ("d_sp", "linear"),
    ("d_rp", "linear"),
    ("d_sp_over_d_rp", "linear"),
    ("rho", "linear"),
    ("log2_rho", "linear"),
    ("rate_alsbr", "bit/slot"),
    ("rate_cubr", "bit/slot"),
    ("rate_cbr", "bit/slot"),
    ("ratio_alsbr_cubr", "linear"),
    ("ratio_alsbr_cbr", "linear"),
    ("mc_alsbr", "bit/slot"),
    ("mc_alsbr_stderr", "bit/slot"),
    ("mc_cubr", "bit/slot"),
    ("mc_cubr_stderr", "bit/slot"),
    ("mc_cbr", "bit/slot"),
    ("mc_cbr_stderr", "bit/slot"),
    ("status", "text"),
)


def _ratio(a, b):
    if math.isnan(a) or math.isnan(b) or b == 0:
        return math.nan
    return a / b


def evaluate_point(config: ExperimentConfig, d_sp: float, d_rp: float, index: int = 0) -> SweepRow:
    """One sweep row; solver failures are recorded in ``status``, not raised."""
    sys = config.system()
    geo = NetworkGeometry(d_sr=config.d_sr, d_rd=config.d_rd, d_sp=d_sp, d_rp=d_rp)
    hops = HopPair(*derive_link_statistics(sys, geo))
    nan = math.nan
    status = "ok"
    rho = rate_a = nan
    if "alsbr" in config.schemes:
        try:
            sol = solve_rho(hops, config.solver, config.policy)
            rho, rate_a = sol.rho, sol.rate
        except SolverError as exc:
            status = f"solver-failed: {type(exc).__name__}"
    rate_u = rate_cubr(hops, config.policy) if "cubr" in config.schemes else nan
    rate_b = rate_cbr(hops) if "cbr" in config.schemes else nan
    mc = {}
    if config.monte_carlo:
        sim = dataclasses.replace(config.simulation, run=index)
        if "alsbr" in config.schemes and not math.isnan(rho):
            res = simulate_alsbr(geo, sys, rho, sim)
            mc["mc_alsbr"], mc["mc_alsbr_stderr"] = res.source_side_rate, res.source_side_stderr
        if "cubr" in config.schemes:
            res = simulate_cubr(geo, sys, sim)
            mc["mc_cubr"], mc["mc_cubr_stderr"] = res.rate, res.stderr
        if "cbr" in config.schemes:
            res = simulate_cbr(geo, sys, sim)
            mc["mc_cbr"], mc["mc_cbr_stderr"] = res.rate, res.stderr
    return SweepRow(
        float(d_sp), float(d_rp), rho, math.log2(rho) if rho > 0 else nan,
        rate_a, rate_u, rate_b, _ratio(rate_a, rate_u), _ratio(rate_a, rate_b),
        status=status, **mc,
    )


def _evaluate_star(args):
    return evaluate_point(*args)


def run_sweep(config: ExperimentConfig, jobs: int = 1, path=None, metadata: Sequence[str] = ()) -> List[SweepRow]:
    """Evaluate every sweep point; rows come back in sweep order whatever ``jobs`` is.

    Writes the CSV when ``path`` (or ``config.output``) is given.
    """
    tasks = [(config, d_sp, d_rp, i) for i, (d_sp, d_rp) in enumerate(config.points())]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate_star, tasks))
    else:
        rows = [_evaluate_star(t) for t in tasks]
    target = path if path is not None else config.output
    if target is not None:
        write_csv(rows, target, config, metadata)
    return rows


def _fmt(value):
    if isinstance(value, str):
        return value
    return repr(float(value))


def format_csv(rows: Iterable[SweepRow], config: ExperimentConfig, metadata: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    buf.write(f"# alsbr {__version__}\n")
    buf.write(f"# python {platform.python_version()}, numpy {np.__version__}, scipy {scipy.__version__}\n")
    for key, value in config.describe():
        buf.write(f"# {key} = {value}\n")
    for line in metadata:
        buf.write(f"# {line}\n")
    buf.write(",".join(f"{name}[{unit}]" for name, unit in CSV_COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(getattr(row, name)) for name, _ in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def write_csv(rows, path, config: ExperimentConfig, metadata: Sequence[str] = ()) -> Path:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(format_csv(rows, config, metadata))
    return path


def read_csv(path) -> Tuple[List[str], List[Dict[str, object]]]:
    """Return (metadata lines, rows keyed by bare column name)."""
    meta, rows, header = [], [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                meta.append(line[1:].strip())
            elif header is None:
                header = [h.split("[", 1)[0] for h in line.split(",")]
            elif line:
                cells = line.split(",")
                rows.append({h: (c if h == "status" else float(c)) for h, c in zip(header, cells)})
    return meta, rows


# ---------------------------------------------------------------------------
# figures


def figure_config(figure_id: int, **overrides) -> ExperimentConfig:
    """Baseline sweep behind figure 2, 3, 4 or 5, with optional overrides."""
    if figure_id not in FIGURE_COLUMNS:
        raise DomainError(f"unknown figure {figure_id!r}; expected one of {sorted(FIGURE_COLUMNS)}")
    base = {
        2: dict(schemes=("alsbr",)),
        3: dict(schemes=("alsbr",)),
        4: dict(schemes=("alsbr", "cubr")),
        5: dict(schemes=("alsbr", "cbr"), d_sp_ratio=FIGURE_D_SP_RATIO),
    }[figure_id]
    base.update(overrides)
    return ExperimentConfig(**base)


def reproduce_figure(figure_id: int, path=None, jobs: int = 1, **overrides) -> List[SweepRow]:
    """Compute the dataset behind a figure; overrides are logged in the CSV metadata."""
    config = figure_config(figure_id, **overrides)
    meta = [f"figure = {figure_id}", "figure_columns = " + ", ".join(FIGURE_COLUMNS[figure_id])]
    meta += [f"override {k} = {v!r}" for k, v in sorted(overrides.items())]
    return run_sweep(config, jobs=jobs, path=path, metadata=meta)


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


# ---------------------------------------------------------------------------
# config files


def parse_snr(text: str) -> float:
    """'30 dB' -> 30.0 (dB); '1000 linear' -> 30.0 (dB)."""
    parts = text.split()
    if len(parts) != 2:
        raise DomainError(f"SNR value {text!r} needs a unit suffix: '<value> dB' or '<value> linear'")
    value, unit = float(parts[0]), parts[1].lower()
    if unit == "db":
        return value
    if unit == "linear":
        if not value > 0:
            raise DomainError(f"linear SNR must be > 0, got {value!r}")
        return 10.0 * math.log10(value)
    raise DomainError(f"unknown SNR unit {parts[1]!r}; use dB or linear")


def parse_values(text: str) -> Tuple[float, ...]:
    """'1, 2, 4' or inclusive 'start:stop:step'."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise DomainError(f"range must be start:stop:step with step > 0, got {text!r}")
        start, stop, step = parts
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 12) for k in range(count))
    vals = tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    if not vals:
        raise DomainError("empty value list")
    return vals


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise DomainError(f"not a boolean: {text!r}")


def load_config(source, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """Read a config file (path or text) on top of ``base`` (defaults to the baseline)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if isinstance(source, (str, os.PathLike)) and Path(source).is_file():
        with open(source, encoding="utf-8") as fh:
            parser.read_file(fh)
    else:
        parser.read_string(str(source))
    allowed = {
        "system": {"gamma_max", "gamma_p", "alpha"},
        "geometry": {"d_sr", "d_rd", "d_sp", "d_rp", "d_sp_over_d_rp"},
        "schemes": {"schemes"},
        "simulation": {"enabled", "slots", "seed", "warmup_slots", "batches"},
        "solver": {"rate_tolerance", "bracket", "max_iterations", "equality_tolerance"},
        "output": {"path"},
    }
    for section in parser.sections():
        if section not in allowed:
            raise DomainError(f"unknown config section [{section}]")
        extra = set(parser[section]) - allowed[section]
        if extra:
            raise DomainError(f"unknown keys in [{section}]: {sorted(extra)}")

    cfg = base or ExperimentConfig()
    changes = {}
    get = lambda sec, key: parser.get(sec, key) if parser.has_option(sec, key) else None
    if (v := get("system", "gamma_max")) is not None:
        changes["gamma_max_db"] = parse_snr(v)
    if (v := get("system", "gamma_p")) is not None:
        changes["gamma_p_db"] = parse_snr(v)
    if (v := get("system", "alpha")) is not None:
        changes["alpha"] = float(v)
    for key in ("d_sr", "d_rd"):
        if (v := get("geometry", key)) is not None:
            changes[key] = float(v)
    if (v := get("geometry", "d_sp")) is not None:
        changes["d_sp"] = parse_values(v)
        changes["d_sp_ratio"] = None
    if (v := get("geometry", "d_sp_over_d_rp")) is not None:
        changes["d_sp_ratio"] = parse_values(v)
    if (v := get("geometry", "d_rp")) is not None:
        changes["d_rp"] = parse_values(v)
    if (v := get("schemes", "schemes")) is not None:
        changes["schemes"] = tuple(s.strip().lower() for s in v.split(",") if s.strip())
    sim = {}
    if (v := get("simulation", "enabled")) is not None:
        changes["monte_carlo"] = _bool(v)
    for key in ("slots", "seed", "warmup_slots", "batches"):
        if (v := get("simulation", key)) is not None:
            sim[key] = int(v)
    if sim:
        changes["simulation"] = dataclasses.replace(cfg.simulation, **sim)
    solver = {}
    if (v := get("solver", "rate_tolerance")) is not None:
        solver["rate_tolerance"] = float(v)
    if (v := get("solver", "bracket")) is not None:
        lo, hi = parse_values(v)
        solver["bracket"] = (lo, hi)
    if (v := get("solver", "max_iterations")) is not None:
        solver["max_iterations"] = int(v)
    if solver:
        changes["solver"] = dataclasses.replace(cfg.solver, **solver)
    if (v := get("solver", "equality_tolerance")) is not None:
        changes["policy"] = dataclasses.replace(cfg.policy, equality_tolerance=float(v))
    if (v := get("output", "path")) is not None:
        changes["output"] = v.strip()
    return dataclasses.replace(cfg, **changes)
