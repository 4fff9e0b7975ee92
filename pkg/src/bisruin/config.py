"""JSON run configurations.

A config looks like::

    {
      "model": {"kind": "clayton", "theta": -0.9,
                "x": {"dist": "poisson", "rate": 0.3},
                "y": {"dist": "poisson", "rate": 1.4}},
      "u_max": 12, "N": 20, "precision_bits": 256, "trunc_eps": 1e-15,
      "output": {"path": "psi.csv", "format": "csv+svg"}
    }

Numbers may be given as JSON numbers or as strings (``"1/3"``, ``"0.3"``);
strings are read exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ._numeric import to_fraction
from .errors import ConfigError, ParameterError
from .joint import BivariatePoisson, Clayton, DependenceSpec, Explicit, Product
from .marginal import Finite, MarginalSpec, Poisson, ShiftedZeta

__all__ = ["RunConfig", "load_config", "parse_config", "parse_model", "model_to_json"]


@dataclass(frozen=True)
class RunConfig:
    model: DependenceSpec
    u_max: int = 12
    N: int = 20
    precision_bits: int = 256
    trunc_eps: object = "1e-15"
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.u_max < 0:
            raise ConfigError("u_max must be >= 0")
        if self.N < 2:
            raise ConfigError("N must be >= 2")
        if self.precision_bits < 64:
            raise ConfigError("precision_bits must be >= 64")
        if self.output_format not in ("csv", "csv+svg"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if to_fraction(self.trunc_eps) <= 0:
            raise ConfigError("trunc_eps must be positive")


def _num(obj: dict, key: str):
    try:
        v = obj[key]
    except KeyError:
        raise ConfigError(f"missing field {key!r}") from None
    try:
        to_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"field {key!r} is not a number: {v!r}") from None
    return v


def parse_marginal(obj) -> MarginalSpec:
    if not isinstance(obj, dict):
        raise ConfigError("marginal must be an object")
    dist = obj.get("dist")
    if dist == "poisson":
        return Poisson(_num(obj, "rate"))
    if dist in ("shifted_zeta", "zeta"):
        return ShiftedZeta(_num(obj, "exponent"))
    if dist == "finite":
        pmf = obj.get("pmf")
        if not isinstance(pmf, list):
            raise ConfigError("finite marginal needs a 'pmf' list")
        return Finite(tuple(pmf))
    raise ConfigError(f"unknown marginal dist {dist!r}")


def parse_model(obj) -> DependenceSpec:
    if not isinstance(obj, dict):
        raise ConfigError("'model' must be an object")
    kind = obj.get("kind")
    try:
        if kind == "explicit":
            matrix = obj.get("matrix")
            if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
                raise ConfigError("explicit model needs a 'matrix' list of lists")
            return Explicit(tuple(tuple(r) for r in matrix))
        if kind == "product":
            return Product(parse_marginal(obj.get("x")), parse_marginal(obj.get("y")))
        if kind == "bivariate_poisson":
            return BivariatePoisson(
                _num(obj, "lambda1"), _num(obj, "lambda2"), _num(obj, "lambda")
            )
        if kind == "clayton":
            return Clayton(
                _num(obj, "theta"), parse_marginal(obj.get("x")), parse_marginal(obj.get("y"))
            )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown model kind {kind!r}")


def parse_config(obj) -> RunConfig:
    if not isinstance(obj, dict) or "model" not in obj:
        raise ConfigError("config must be an object with a 'model' field")
    out = obj.get("output") or {}
    try:
        return RunConfig(
            model=parse_model(obj["model"]),
            u_max=int(obj.get("u_max", 12)),
            N=int(obj.get("N", 20)),
            precision_bits=int(obj.get("precision_bits", 256)),
            trunc_eps=obj.get("trunc_eps", "1e-15"),
            output_path=out.get("path"),
            output_format=out.get("format", "csv"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return parse_config(obj)


def _js(v):
    return v if isinstance(v, (int, float, str)) else str(v)


def _marginal_json(spec: MarginalSpec) -> dict:
    if isinstance(spec, Poisson):
        return {"dist": "poisson", "rate": _js(spec.rate)}
    if isinstance(spec, ShiftedZeta):
        return {"dist": "shifted_zeta", "exponent": _js(spec.exponent)}
    return {"dist": "finite", "pmf": [_js(p) for p in spec.pmf]}


def model_to_json(spec: DependenceSpec) -> dict:
    if isinstance(spec, Explicit):
        return {"kind": "explicit", "matrix": [[_js(v) for v in r] for r in spec.matrix]}
    if isinstance(spec, Product):
        return {"kind": "product", "x": _marginal_json(spec.x), "y": _marginal_json(spec.y)}
    if isinstance(spec, BivariatePoisson):
        return {
            "kind": "bivariate_poisson",
            "lambda1": _js(spec.lambda1),
            "lambda2": _js(spec.lambda2),
            "lambda": _js(spec.lam),
        }
    return {
        "kind": "clayton",
        "theta": _js(spec.theta),
        "x": _marginal_json(spec.x),
        "y": _marginal_json(spec.y),
    }
