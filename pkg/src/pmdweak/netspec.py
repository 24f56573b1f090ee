"""Network and experiment descriptions and their JSON file format.

A document looks like::

    {
      "network": {
        "name": "pmd-pdl",
        "trunks": [
          {"kind": "pmd", "dgd": 0.1, "vector": [0, 0, 1]},
          {"kind": "pdl", "pdl_db": 3.0, "angles": [1.2, 0.4]}
        ]
      },
      "pulse": {"t_c": 10.0, "omega0": 1216.0},
      "input_state": {"angles": [1.5707963267948966, 0.0]},
      "grid": {"n": 4096}
    }

PDL trunks take exactly one of ``mu``, ``pdl_db`` or ``"polarizer": true``.
Axes are given by ``angles`` ([theta, phi] in radians) or ``vector``
([nx, ny, nz]). ``to_canonical`` always writes ``mu`` (or ``polarizer``),
``vector`` axes and the resolved grid.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import PmdWeakError, ValidationError
from .jones import Axis
from .pulse import GaussianPulse, Grid, _samples_for

GRID_ENV_VAR = "PMDWEAK_GRID_N"
DEFAULT_OMEGA0 = 1216.0
MAX_GRID_N = 1 << 20
VECTOR_TOL = 1e-6


def db_to_mu(pdl_db: float) -> float:
    """PDL strength from max/min intensity transmission in dB.

    The filter eigenvalues are ``exp(+-mu/2)``, so the intensity ratio is
    ``exp(2 mu)`` and ``dB = 10 log10(exp(2 mu))``.
    """
    return pdl_db * math.log(10) / 20


def mu_to_db(mu: float) -> float:
    return mu * 20 / math.log(10)


@dataclass(frozen=True)
class Pmd:
    dgd: float
    axis: Axis

    def __post_init__(self):
        if not (self.dgd >= 0 and math.isfinite(self.dgd)):
            raise ValidationError(f"dgd must be finite and >= 0, got {self.dgd!r}")


@dataclass(frozen=True)
class Pdl:
    """PDL element; ``mu = inf`` is an ideal polarizer passing ``|+axis>``."""

    mu: float
    axis: Axis

    def __post_init__(self):
        if not (self.mu >= 0):
            raise ValidationError(f"mu must be >= 0, got {self.mu!r}")

    @classmethod
    def from_db(cls, pdl_db: float, axis: Axis) -> "Pdl":
        return cls(db_to_mu(pdl_db), axis)

    @classmethod
    def polarizer(cls, axis: Axis) -> "Pdl":
        return cls(math.inf, axis)

    @property
    def is_polarizer(self) -> bool:
        return self.mu == math.inf


@dataclass(frozen=True)
class Network:
    trunks: tuple
    name: str = "network"

    def __post_init__(self):
        object.__setattr__(self, "trunks", tuple(self.trunks))
        if not self.trunks:
            raise ValidationError("network must contain at least one trunk")
        for t in self.trunks:
            if not isinstance(t, (Pmd, Pdl)):
                raise ValidationError(f"unknown trunk type {type(t).__name__}")

    def __len__(self):
        return len(self.trunks)

    def __iter__(self):
        return iter(self.trunks)

    @property
    def total_dgd(self) -> float:
        return sum(t.dgd for t in self.trunks if isinstance(t, Pmd))

    @property
    def has_pdl(self) -> bool:
        return any(isinstance(t, Pdl) and t.mu > 0 for t in self.trunks)

    @property
    def is_alternating(self) -> bool:
        """PMD, PDL, PMD, ..., PMD (2N+1 trunks)."""
        return len(self.trunks) % 2 == 1 and all(
            isinstance(t, Pmd if i % 2 == 0 else Pdl) for i, t in enumerate(self.trunks)
        )

    def scaled(self, factor: float) -> "Network":
        """Same network with every DGD multiplied by ``factor``."""
        return Network(
            [Pmd(t.dgd * factor, t.axis) if isinstance(t, Pmd) else t for t in self.trunks],
            self.name,
        )


def default_grid_n() -> int:
    raw = os.environ.get(GRID_ENV_VAR)
    if raw is None:
        return 4096
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{GRID_ENV_VAR} must be an integer, got {raw!r}") from None
    if n < 64:
        raise ValidationError(f"{GRID_ENV_VAR} must be >= 64, got {n}")
    return n


@dataclass(frozen=True)
class Experiment:
    network: Network
    pulse: GaussianPulse
    input_angles: tuple[float, float]
    grid: Grid = field(default=None)

    def __post_init__(self):
        if self.grid is None:
            g = Grid.for_pulse(self.pulse.t_c, self.network.total_dgd, default_grid_n())
            object.__setattr__(self, "grid", g)

    @property
    def input_state(self) -> np.ndarray:
        theta, phi = self.input_angles
        return np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)])


# -- parsing -----------------------------------------------------------------


class SpecError(PmdWeakError, ValueError):
    """Base class for experiment-document errors."""

    category = "error"

    def __str__(self):
        return f"{self.category}: {super().__str__()}"


class SpecSyntaxError(SpecError):
    category = "syntax error"


class DuplicateKeyError(SpecSyntaxError):
    category = "duplicate key"


class UnknownKeyError(SpecError):
    category = "unknown key"


class MissingFieldError(SpecError):
    category = "missing field"


class ConstraintError(SpecError):
    category = "constraint violation"


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise DuplicateKeyError(f"key {k!r} appears more than once")
        out[k] = v
    return out


def _reject_constant(name):
    raise ConstraintError(f"non-finite number {name} is not allowed")


def _obj(value, where):
    if not isinstance(value, dict):
        raise ConstraintError(f"{where} must be an object")
    return value


def _check_keys(obj, where, allowed, required=()):
    for k in obj:
        if k not in allowed:
            raise UnknownKeyError(f"{where}.{k}")
    for k in required:
        if k not in obj:
            raise MissingFieldError(f"{where}.{k}")


def _num(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConstraintError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConstraintError(f"{where} must be finite")
    return value


def _nums(value, where, count):
    if not isinstance(value, list) or len(value) != count:
        raise ConstraintError(f"{where} must be a list of {count} numbers")
    return [_num(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _axis(obj, where) -> Axis:
    has_a, has_v = "angles" in obj, "vector" in obj
    if has_a and has_v:
        raise ConstraintError(f"{where}: give either 'angles' or 'vector', not both")
    if has_a:
        theta, phi = _nums(obj["angles"], f"{where}.angles", 2)
        return Axis.from_angles(theta, phi)
    if has_v:
        vec = _nums(obj["vector"], f"{where}.vector", 3)
        try:
            return Axis.from_vector(vec, tol=VECTOR_TOL)
        except ValidationError as exc:
            raise ConstraintError(f"{where}.vector: {exc}") from None
    raise MissingFieldError(f"{where}.angles or {where}.vector")


def _trunk(obj, where):
    obj = _obj(obj, where)
    if "kind" not in obj:
        raise MissingFieldError(f"{where}.kind")
    kind = obj["kind"]
    if kind == "pmd":
        _check_keys(obj, where, {"kind", "dgd", "angles", "vector"}, ["dgd"])
        dgd = _num(obj["dgd"], f"{where}.dgd")
        if dgd < 0:
            raise ConstraintError(f"{where}.dgd must be >= 0, got {dgd}")
        return Pmd(dgd, _axis(obj, where))
    if kind == "pdl":
        _check_keys(obj, where, {"kind", "mu", "pdl_db", "polarizer", "angles", "vector"})
        given = [k for k in ("mu", "pdl_db", "polarizer") if k in obj]
        if not given:
            raise MissingFieldError(f"{where}.mu (or pdl_db / polarizer)")
        if len(given) > 1:
            raise ConstraintError(f"{where}: give exactly one of mu / pdl_db / polarizer")
        axis = _axis(obj, where)
        if given[0] == "polarizer":
            if obj["polarizer"] is not True:
                raise ConstraintError(f"{where}.polarizer must be true when present")
            return Pdl.polarizer(axis)
        key = given[0]
        value = _num(obj[key], f"{where}.{key}")
        if value < 0:
            raise ConstraintError(f"{where}.{key} must be >= 0 (flip the axis instead)")
        return Pdl(value, axis) if key == "mu" else Pdl.from_db(value, axis)
    raise ConstraintError(f"{where}.kind must be 'pmd' or 'pdl', got {kind!r}")


def _from_dict(doc) -> Experiment:
    doc = _obj(doc, "document")
    _check_keys(doc, "document", {"network", "pulse", "input_state", "grid"},
                ["network", "pulse", "input_state"])

    net = _obj(doc["network"], "network")
    _check_keys(net, "network", {"name", "trunks"}, ["trunks"])
    name = net.get("name", "network")
    if not isinstance(name, str):
        raise ConstraintError("network.name must be a string")
    trunks = net["trunks"]
    if not isinstance(trunks, list) or not trunks:
        raise ConstraintError("network.trunks must be a non-empty list")
    network = Network([_trunk(t, f"network.trunks[{i}]") for i, t in enumerate(trunks)], name)

    p = _obj(doc["pulse"], "pulse")
    _check_keys(p, "pulse", {"t_c", "omega0"}, ["t_c"])
    t_c = _num(p["t_c"], "pulse.t_c")
    omega0 = _num(p.get("omega0", DEFAULT_OMEGA0), "pulse.omega0")
    if t_c <= 0:
        raise ConstraintError(f"pulse.t_c must be > 0, got {t_c}")
    if omega0 < 0:
        raise ConstraintError(f"pulse.omega0 must be >= 0, got {omega0}")
    pulse = GaussianPulse(t_c, omega0)

    s = _obj(doc["input_state"], "input_state")
    _check_keys(s, "input_state", {"angles", "vector"})
    ax = _axis(s, "input_state")
    if "angles" in s:
        angles = tuple(_nums(s["angles"], "input_state.angles", 2))
    else:
        angles = (ax.theta, ax.phi)

    g = _obj(doc.get("grid", {}), "grid")
    _check_keys(g, "grid", {"n", "t_span"})
    n = g.get("n")
    if n is not None:
        if isinstance(n, bool) or not isinstance(n, int):
            raise ConstraintError(f"grid.n must be an integer, got {n!r}")
        if n < 64 or n > MAX_GRID_N or n & (n - 1):
            raise ConstraintError(f"grid.n must be a power of two in [64, {MAX_GRID_N}], got {n}")
    min_span = 16 * t_c + 2 * network.total_dgd
    if "t_span" in g:
        span = _num(g["t_span"], "grid.t_span")
        if span < min_span * (1 - 1e-12):
            raise ConstraintError(
                f"grid.t_span must be >= 16 t_c + 2 sum(dgd) = {min_span}, got {span}"
            )
        if n is None:
            n = _samples_for(span, t_c, default_grid_n())
        if span / n > t_c / 32 * (1 + 1e-12):
            raise ConstraintError(f"grid too coarse: dt = {span / n} ps exceeds t_c/32")
        grid = Grid(n, span)
    else:
        grid = Grid.for_pulse(t_c, network.total_dgd, n if n is not None else default_grid_n())
        if n is not None and grid.n != n:
            raise ConstraintError(f"grid too coarse: n = {n} gives dt above t_c/32")
    if grid.n > MAX_GRID_N:
        raise ConstraintError(f"grid needs {grid.n} samples, above the limit {MAX_GRID_N}")
    return Experiment(network, pulse, angles, grid)


def parse_experiment(text: str) -> Experiment:
    """Parse and validate an experiment document.

    Every failure is raised as a :class:`SpecError` subclass.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"{exc.msg} at line {exc.lineno}, column {exc.colno}") from None
    except RecursionError:
        raise SpecSyntaxError("document nested too deeply") from None
    try:
        return _from_dict(doc)
    except SpecError:
        raise
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise ConstraintError(str(exc)) from None


def load_experiment(path) -> Experiment:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise SpecError(f"cannot read {path}: {exc}") from None
    return parse_experiment(text)


def _axis_doc(axis: Axis) -> dict:
    return {"vector": [axis.x, axis.y, axis.z]}


def _trunk_doc(t) -> dict:
    if isinstance(t, Pmd):
        return {"kind": "pmd", "dgd": t.dgd, **_axis_doc(t.axis)}
    if t.is_polarizer:
        return {"kind": "pdl", "polarizer": True, **_axis_doc(t.axis)}
    return {"kind": "pdl", "mu": t.mu, **_axis_doc(t.axis)}


def to_dict(spec: Experiment) -> dict:
    return {
        "network": {
            "name": spec.network.name,
            "trunks": [_trunk_doc(t) for t in spec.network.trunks],
        },
        "pulse": {"t_c": spec.pulse.t_c, "omega0": spec.pulse.omega0},
        "input_state": {"angles": list(spec.input_angles)},
        "grid": {"n": spec.grid.n, "t_span": spec.grid.t_span},
    }


def to_canonical(spec: Experiment) -> str:
    """Deterministic JSON text; ``parse_experiment(to_canonical(s)) == s``."""
    return json.dumps(to_dict(spec), indent=2) + "\n"
