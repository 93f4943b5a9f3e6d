"""Run configuration: a line-oriented ``key = value`` format.

``#`` starts a comment, keys may be dotted (``grid.n``), and every key may
appear at most once.  Unknown keys and malformed values raise
:class:`ConfigError` naming the key and the line.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

from .errors import ConfigError, GridError
from .grid import Grid
from .symbols import make_symbol

FORMATS = ("csv", "json")
SUBCOMMANDS = ("delta", "kernel", "solve", "verify", "report")
NONLINEARITIES = ("auto", "quadratic", "wb-cubic")
METHODS = ("auto", "petviashvili", "damped")


@dataclass(frozen=True)
class GridConfig:
    n: int = 16384
    X: float = 80.0


@dataclass(frozen=True)
class SolverConfig:
    method: str = "auto"
    tol: float = 1e-10
    max_iter: int = 2000
    theta: float = 0.5


@dataclass(frozen=True)
class FitConfig:
    origin: tuple | None = None  # None means the library default
    tail: tuple | None = None


@dataclass(frozen=True)
class VerifyConfig:
    decay_window: tuple | None = None
    decay_rel: float = 0.05
    asymmetry_rel: float = 1e-6
    spectral_tail: float = 1e-8
    residual: float | None = None  # None means solver.tol


@dataclass(frozen=True)
class RunConfig:
    symbol: str = "whitham"
    beta: float | None = None
    c_power: int | None = None
    c: tuple = ()
    nonlinearity: str = "auto"
    grid: GridConfig = field(default_factory=GridConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    formats: tuple = FORMATS
    subcommand: str | None = None

    def make_symbol(self):
        params = {"beta": self.beta} if self.beta is not None else {}
        return make_symbol(self.symbol, c_power=self.c_power, **params)

    def make_grid(self):
        return Grid(self.grid.n, self.grid.X)

    def resolved_nonlinearity(self):
        if self.nonlinearity != "auto":
            return self.nonlinearity
        sym = self.make_symbol()
        if sym.name == "bidirectional-whitham" and sym.c_power == 2:
            return "wb-cubic"
        return "quadratic"

    def to_dict(self):
        out = asdict(self)
        out["symbol"] = self.make_symbol().name
        out["c"] = list(self.c)
        out["formats"] = list(self.formats)
        out["nonlinearity"] = self.resolved_nonlinearity()
        out["c_power"] = self.make_symbol().c_power
        if out["verify"]["residual"] is None:
            out["verify"]["residual"] = self.solver.tol
        for section, key in (("fit", "origin"), ("fit", "tail"), ("verify", "decay_window")):
            val = out[section][key]
            out[section][key] = list(val) if val is not None else "auto"
        return out

    def to_text(self):
        """Fully resolved config in the input format."""
        d = self.to_dict()
        lines = []
        for key in ("symbol", "beta", "c_power", "c", "nonlinearity"):
            val = d[key]
            if val is None:
                continue
            lines.append(f"{key} = {_fmt(val)}")
        for section in ("grid", "solver", "fit", "verify"):
            for key, val in d[section].items():
                lines.append(f"{section}.{key} = {_fmt(val)}")
        lines.append(f"output.format = {','.join(self.formats)}")
        return "\n".join(lines) + "\n"


def _fmt(val):
    if isinstance(val, (list, tuple)):
        return ", ".join(_fmt(v) for v in val)
    if isinstance(val, float):
        return repr(val)
    return str(val)


# ---------------------------------------------------------------------------
# Value parsers
# ---------------------------------------------------------------------------


def _float(text):
    val = float(text)
    if not math.isfinite(val):
        raise ValueError("not finite")
    return val


def _int(text):
    val = float(text)
    if val != int(val):
        raise ValueError("not an integer")
    return int(val)


def _positive(parse):
    def inner(text):
        val = parse(text)
        if not val > 0:
            raise ValueError("must be positive")
        return val

    return inner


def _float_list(text):
    vals = tuple(_float(t) for t in text.split(",") if t.strip())
    if not vals:
        raise ValueError("empty list")
    return vals


def _window(text):
    if text.strip().lower() == "auto":
        return None
    vals = _float_list(text)
    if len(vals) != 2 or not (0 < vals[0] < vals[1]):
        raise ValueError("expected 'x_lo, x_hi' with 0 < x_lo < x_hi, or 'auto'")
    return vals


def _choice(options):
    def inner(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text

    return inner


def _nonlinearity(text):
    if text in NONLINEARITIES or text.startswith("power-"):
        return text
    raise ValueError(f"expected one of {', '.join(NONLINEARITIES)} or power-<r>")


def _formats(text):
    vals = tuple(t.strip() for t in text.split(",") if t.strip())
    if not vals or any(v not in FORMATS for v in vals):
        raise ValueError("expected a comma list drawn from csv, json")
    return vals


# key -> (section or None, field, parser)
_KEYS = {
    "symbol": (None, "symbol", str),
    "beta": (None, "beta", _positive(_float)),
    "c_power": (None, "c_power", _positive(_int)),
    "c": (None, "c", _float_list),
    "nonlinearity": (None, "nonlinearity", _nonlinearity),
    "grid.n": ("grid", "n", _int),
    "grid.X": ("grid", "X", _positive(_float)),
    "solver.method": ("solver", "method", _choice(METHODS)),
    "solver.tol": ("solver", "tol", _positive(_float)),
    "solver.max_iter": ("solver", "max_iter", _positive(_int)),
    "solver.theta": ("solver", "theta", _float),
    "fit.origin": ("fit", "origin", _window),
    "fit.tail": ("fit", "tail", _window),
    "verify.decay_window": ("verify", "decay_window", _window),
    "verify.decay_rel": ("verify", "decay_rel", _positive(_float)),
    "verify.asymmetry_rel": ("verify", "asymmetry_rel", _positive(_float)),
    "verify.spectral_tail": ("verify", "spectral_tail", _positive(_float)),
    "verify.residual": ("verify", "residual", _positive(_float)),
    "output.format": (None, "formats", _formats),
}

KNOWN_KEYS = tuple(_KEYS)


def _parse_pairs(text):
    """Yield (key, value, line_number) from config text."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ConfigError("missing key", line=lineno)
        yield key, value, lineno


def parse_config(text, overrides=(), require_speed=True):
    """Parse and validate a run configuration.

    Parameters
    ----------
    text : str
        ``key = value`` lines.
    overrides : iterable of str
        Extra ``key=value`` strings applied after the text (later wins);
        used by the CLI's ``--set`` option.
    require_speed : bool
        Reject configurations without a ``c`` entry.

    Returns
    -------
    RunConfig
    """
    top, sections = {}, {"grid": {}, "solver": {}, "fit": {}, "verify": {}}
    lines = {}
    seen = set()

    def apply(key, value, lineno, allow_repeat):
        if key not in _KEYS:
            raise ConfigError(f"unknown key; known keys are {', '.join(KNOWN_KEYS)}", key=key, line=lineno)
        if key in seen and not allow_repeat:
            raise ConfigError("duplicate key", key=key, line=lineno)
        seen.add(key)
        section, name, parser = _KEYS[key]
        try:
            val = parser(value)
        except ValueError as exc:
            raise ConfigError(f"malformed value {value!r}: {exc}", key=key, line=lineno) from None
        (sections[section] if section else top)[name] = val
        lines[key] = lineno

    for key, value, lineno in _parse_pairs(text):
        apply(key, value, lineno, allow_repeat=False)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, _, value = item.partition("=")
        apply(key.strip(), value.strip(), None, allow_repeat=True)

    cfg = RunConfig(
        **top,
        grid=replace(GridConfig(), **sections["grid"]),
        solver=replace(SolverConfig(), **sections["solver"]),
        fit=replace(FitConfig(), **sections["fit"]),
        verify=replace(VerifyConfig(), **sections["verify"]),
    )
    return validate(cfg, lines, require_speed)


def validate(cfg, lines=None, require_speed=True):
    lines = lines or {}
    try:
        cfg.make_grid()
    except GridError as exc:
        bad = "grid.n" if "n_points" in str(exc) else "grid.X"
        raise ConfigError(str(exc), key=bad, line=lines.get(bad)) from None
    try:
        sym = cfg.make_symbol()
    except ConfigError as exc:
        key = exc.key or "symbol"
        raise ConfigError(exc.detail, key=key, line=lines.get(key)) from None
    if cfg.beta is not None and sym.name != "capillary-whitham":
        raise ConfigError(f"beta only applies to capillary-whitham, not {sym.name}", key="beta", line=lines.get("beta"))
    if require_speed and not cfg.c:
        raise ConfigError("at least one speed is required", key="c", line=lines.get("c"))
    if any(not v > 0 for v in cfg.c):
        raise ConfigError("speeds must be positive", key="c", line=lines.get("c"))
    if not (0.0 < cfg.solver.theta <= 1.0):
        raise ConfigError("damping must lie in (0, 1]", key="solver.theta", line=lines.get("solver.theta"))
    if cfg.fit.origin is not None and cfg.fit.origin[1] > 0.5:
        raise ConfigError("origin window must end at or below 0.5", key="fit.origin", line=lines.get("fit.origin"))
    return cfg


def load_config(path, overrides=(), require_speed=True):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, overrides, require_speed)
