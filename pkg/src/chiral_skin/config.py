"""Flat ``section.key = value`` experiment configuration.

Values may be written as multiples of pi (``0.35pi``, ``pi/2``,
``-0.5*pi``).  Keys under ``sweep.`` accept comma-separated lists.
"""

import ast
import math
import operator
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .effective_model import EffectiveParams
from .errors import ConfigError, InvalidParams
from .waveguide_qed import ModelParams

EXPERIMENTS = (
    "fig2", "fig3", "fig4", "figS1", "figS2", "figS3", "figS4_potential",
    "figS5_state", "figS6", "figS7_S8", "verify-analytics", "custom",
)
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Numerics:
    r_max: int = 200
    k_points: int = 400
    grid_size: int = 0  # 0 selects 4 N
    peak_threshold: float = 0.5
    eig_tol: float = 1e-10
    quadrature_points: int = 0  # 0 selects max(4096, 64 N)
    q_samples: int = 2000


@dataclass(frozen=True)
class Checks:
    window_lo: float = -0.8
    window_hi: float = 1.1


@dataclass(frozen=True)
class Output:
    dir: str = ""
    format: str = "csv"


@dataclass
class ExperimentConfig:
    experiment: str
    model: ModelParams
    effective: EffectiveParams
    numerics: Numerics
    checks: Checks = field(default_factory=Checks)
    output: Output = field(default_factory=Output)
    sweep: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    source: str = ""

    def resolved(self):
        """Plain dict of every resolved setting, for provenance records."""
        return {
            "experiment": self.experiment,
            "model": asdict(self.model),
            "effective": asdict(self.effective),
            "numerics": asdict(self.numerics),
            "checks": asdict(self.checks),
            "output": asdict(self.output),
            "sweep": {k: list(v) for k, v in sorted(self.sweep.items())},
        }


# parameters of the two-photon figures
MODEL_DEFAULTS = {"phi": 0.35 * math.pi, "xi": 0.7, "gamma1d": 1.0, "n_atoms": 40}

# experiment-specific defaults applied before the file's own values
EXPERIMENT_DEFAULTS = {
    "figS5_state": {"sweep.Phi": (0.0, -0.5, 0.5)},
    "figS6": {"effective.Phi": 0.0},
    "figS7_S8": {"effective.n_sites": 50, "sweep.sigma": (0.025, 0.05)},
    "figS1": {"sweep.xi": (1.0, 0.7, 0.1)},
    "figS2": {"sweep.xi": (1.0, 0.7, 0.1)},
}

_SECTIONS = {
    "model": ModelParams,
    "effective": EffectiveParams,
    "numerics": Numerics,
    "checks": Checks,
    "output": Output,
}
_SWEEP_KEYS = ("xi", "sigma", "Phi")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_node(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    raise ValueError("unsupported expression")


def parse_number(text):
    """Parse ``0.35pi``, ``pi/2``, ``-0.5``, ``1e-10`` and similar."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty value")
    # '0.35pi' -> '0.35*pi'
    out = []
    for i, ch in enumerate(s):
        if s.startswith("pi", i) and i > 0 and (s[i - 1].isdigit() or s[i - 1] == "."):
            out.append("*")
        out.append(ch)
    return float(_eval_node(ast.parse("".join(out), mode="eval").body))


def _coerce(key, raw, typ):
    try:
        if typ is int:
            value = parse_number(raw)
            if value != int(value):
                raise ValueError("not an integer")
            return int(value)
        if typ is float:
            return parse_number(raw)
        return raw.strip()
    except (ValueError, SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {raw!r} ({exc})", key=key) from None


def parse_text(text):
    """Split config text into an ordered ``{key: raw_value}`` mapping."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, value = (part.strip() for part in body.split("=", 1))
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key", key=key)
        entries[key] = value
    return entries


def _field_types(cls):
    hints = {"int": int, "float": float, "str": str}
    return {f.name: hints.get(f.type if isinstance(f.type, str) else f.type.__name__, float) for f in fields(cls)}


def build_config(entries, source=""):
    entries = dict(entries)
    experiment = entries.pop("experiment", None)
    if experiment is None:
        raise ConfigError("missing required key", key="experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}", key="experiment")

    values = {name: {} for name in _SECTIONS}
    values["model"].update(MODEL_DEFAULTS)
    sweep = {}
    for key, default in EXPERIMENT_DEFAULTS.get(experiment, {}).items():
        section, name = key.split(".", 1)
        if section == "sweep":
            sweep[name] = tuple(default)
        else:
            values[section][name] = default

    for key, raw in entries.items():
        section, _, name = key.partition(".")
        if section == "sweep":
            if name not in _SWEEP_KEYS:
                raise ConfigError(f"unknown sweep key (known: {', '.join(_SWEEP_KEYS)})", key=key)
            items = [x for x in raw.split(",") if x.strip()]
            if not items:
                raise ConfigError("empty list", key=key)
            sweep[name] = tuple(_coerce(key, x, float) for x in items)
            continue
        if section not in _SECTIONS or not name:
            raise ConfigError("unknown key", key=key)
        types = _field_types(_SECTIONS[section])
        if name not in types:
            raise ConfigError(f"unknown key in section [{section}]", key=key)
        values[section][name] = _coerce(key, raw, types[name])

    _validate_ranges(values, sweep)
    try:
        model = ModelParams(**values["model"])
        effective = EffectiveParams(**values["effective"])
    except InvalidParams as exc:
        raise ConfigError(str(exc)) from None
    cfg = ExperimentConfig(
        experiment=experiment,
        model=model,
        effective=effective,
        numerics=Numerics(**values["numerics"]),
        checks=Checks(**values["checks"]),
        output=Output(**values["output"]),
        sweep=sweep,
        source=source,
    )
    cfg.warnings = physics_warnings(cfg)
    return cfg


def _require(ok, key, message):
    if not ok:
        raise ConfigError(message, key=key)


def _validate_ranges(values, sweep):
    m, e, n, o = values["model"], values["effective"], values["numerics"], values["output"]
    if "phi" in m:
        _require(0 < m["phi"] < math.pi, "model.phi", f"model.phi={m['phi']:g} must lie in (0, pi)")
    if "xi" in m:
        _require(0 < m["xi"] <= 1, "model.xi", f"model.xi={m['xi']:g} must lie in (0, 1]")
    if "gamma1d" in m:
        _require(m["gamma1d"] > 0, "model.gamma1d", "model.gamma1d must be positive")
    if "n_atoms" in m:
        _require(m["n_atoms"] >= 2, "model.n_atoms", "model.n_atoms must be >= 2")
    if "t" in e:
        _require(e["t"] > 0, "effective.t", "effective.t must be positive")
    if "Gamma" in e:
        _require(e["Gamma"] >= 0, "effective.Gamma", "effective.Gamma must be >= 0")
    if "sigma" in e:
        _require(e["sigma"] > 0, "effective.sigma", "effective.sigma must be positive")
    if "two_phi" in e:
        _require(0 < e["two_phi"] < math.pi, "effective.two_phi", "effective.two_phi must lie in (0, pi)")
    if "n_sites" in e:
        _require(e["n_sites"] >= 2, "effective.n_sites", "effective.n_sites must be >= 2")
    if "r_max" in n:
        _require(n["r_max"] >= 2, "numerics.r_max", "numerics.r_max must be >= 2")
    if "k_points" in n:
        _require(n["k_points"] >= 8 and n["k_points"] % 2 == 0, "numerics.k_points",
                 "numerics.k_points must be an even integer >= 8")
    if "grid_size" in n:
        _require(n["grid_size"] >= 0, "numerics.grid_size", "numerics.grid_size must be >= 0")
    if "peak_threshold" in n:
        _require(0 < n["peak_threshold"] < 1, "numerics.peak_threshold", "numerics.peak_threshold must lie in (0, 1)")
    if "eig_tol" in n:
        _require(n["eig_tol"] > 0, "numerics.eig_tol", "numerics.eig_tol must be positive")
    if "quadrature_points" in n:
        _require(n["quadrature_points"] >= 0, "numerics.quadrature_points", "numerics.quadrature_points must be >= 0")
    if "q_samples" in n:
        _require(n["q_samples"] >= 100, "numerics.q_samples", "numerics.q_samples must be >= 100")
    if "format" in o:
        _require(o["format"] in FORMATS, "output.format", f"output.format must be one of {FORMATS}")
    for x in sweep.get("xi", ()):
        _require(0 < x <= 1, "sweep.xi", f"sweep.xi entry {x:g} must lie in (0, 1]")
    for s in sweep.get("sigma", ()):
        _require(s > 0, "sweep.sigma", f"sweep.sigma entry {s:g} must be positive")


def physics_warnings(cfg):
    out = []
    n = cfg.model.n_atoms
    grid = cfg.numerics.grid_size
    if grid and grid < 4 * n:
        out.append(f"numerics.grid_size={grid} below 4N={4 * n}: momentum peaks poorly resolved")
    sigmas = cfg.sweep.get("sigma", (cfg.effective.sigma,))
    for s in sigmas:
        msg = replace(cfg.effective, sigma=s).regime_warning()
        if msg:
            out.append(msg)
    return out


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return build_config(parse_text(text), source=str(path))
