"""JSON run configurations for the experiment runner.

A config names one instrument, the credit and default-model parameters,
the valuation method, and optionally a parameter sweep. Exactly one of
theta / kendall_tau identifies the dependence level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .default_model import GumbelBivariateExponential
from .engine import CreditParams, EquityForward, Market, ZeroCouponBond
from .errors import ConfigError
from .market import DiscountCurve, GbmEquity
from .mc import McConfig


@dataclass(frozen=True)
class Sweep:
    variable: str  # "tau" or "lambda_a"
    grid: tuple[float, ...]


@dataclass(frozen=True)
class RunConfig:
    instrument: EquityForward | ZeroCouponBond
    s0: float
    sigma: float
    credit: CreditParams
    lambda_a: float
    lambda_b: float
    theta: float
    rate: float = 0.0
    method: McConfig | str = "semi_analytic"
    sweep: Sweep | None = None
    estimator: str = "conditional"

    def market(self) -> Market:
        return Market(DiscountCurve(self.rate), GbmEquity(self.s0, self.sigma))

    def model(self, theta: float | None = None, lambda_a: float | None = None):
        return GumbelBivariateExponential(
            lambda_a=self.lambda_a if lambda_a is None else lambda_a,
            lambda_b=self.lambda_b,
            theta=self.theta if theta is None else theta,
        )


def _require(obj, key: str, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    if key not in obj:
        raise ConfigError(f"{where}: missing required field '{key}'")
    return obj[key]


def _number(obj, key: str, where: str, default=None):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    if key not in obj:
        if default is not None:
            return default
        raise ConfigError(f"{where}: missing required field '{key}'")
    v = obj[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON config; raises ConfigError naming the field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a JSON object")

    inst = _require(doc, "instrument", "top level")
    kind = _require(inst, "type", "instrument")
    try:
        if kind == "forward":
            instrument = EquityForward(
                strike=_number(inst, "strike", "instrument"),
                maturity=_number(inst, "maturity", "instrument"),
            )
            s0 = _number(inst, "s0", "instrument")
            sigma = _number(inst, "sigma", "instrument")
        elif kind == "zcb":
            instrument = ZeroCouponBond(maturity=_number(inst, "maturity", "instrument"))
            # equity is irrelevant for the bond; keep harmless defaults
            s0 = _number(inst, "s0", "instrument", default=1.0)
            sigma = _number(inst, "sigma", "instrument", default=0.2)
        else:
            raise ConfigError(f"instrument.type: expected 'forward' or 'zcb', got {kind!r}")

        cred = doc.get("credit", {})
        credit = CreditParams(
            lgd_a=_number(cred, "lgd_a", "credit", default=1.0),
            lgd_b=_number(cred, "lgd_b", "credit", default=1.0),
        )

        dm = _require(doc, "default_model", "top level")
        lambda_a = _number(dm, "lambda_a", "default_model")
        lambda_b = _number(dm, "lambda_b", "default_model")
        has_theta = "theta" in dm
        has_tau = "kendall_tau" in dm
        if has_theta == has_tau:
            raise ConfigError("default_model: give exactly one of theta / kendall_tau")
        if has_theta:
            theta = _number(dm, "theta", "default_model")
            GumbelBivariateExponential(lambda_a, lambda_b, theta)  # validate early
        else:
            tau = _number(dm, "kendall_tau", "default_model")
            theta = GumbelBivariateExponential.from_kendall_tau(lambda_a, lambda_b, tau).theta

        rate = _number(doc, "rate", "top level", default=0.0)

        meth = doc.get("method", {"type": "semi_analytic"})
        mkind = _require(meth, "type", "method")
        if mkind == "mc":
            method: McConfig | str = McConfig(
                n_paths=int(_number(meth, "n_paths", "method")),
                seed=int(_number(meth, "seed", "method")),
                chunk_size=int(_number(meth, "chunk_size", "method", default=1 << 16)),
                antithetic=bool(meth.get("antithetic", False)),
            )
        elif mkind == "semi_analytic":
            method = "semi_analytic"
        else:
            raise ConfigError(f"method.type: expected 'mc' or 'semi_analytic', got {mkind!r}")

        sweep = None
        if "sweep" in doc and doc["sweep"] is not None:
            sw = doc["sweep"]
            var = _require(sw, "variable", "sweep")
            if var not in ("tau", "lambda_a"):
                raise ConfigError(f"sweep.variable: expected 'tau' or 'lambda_a', got {var!r}")
            grid = _require(sw, "grid", "sweep")
            if not isinstance(grid, list) or not grid:
                raise ConfigError("sweep.grid: expected a non-empty list of numbers")
            values = []
            for i, g in enumerate(grid):
                if not isinstance(g, (int, float)) or isinstance(g, bool):
                    raise ConfigError(f"sweep.grid[{i}]: expected a number, got {g!r}")
                values.append(float(g))
            if sorted(values) != values:
                raise ConfigError("sweep.grid: must be sorted ascending")
            sweep = Sweep(variable=var, grid=tuple(values))

        estimator = doc.get("estimator", "conditional")
        if estimator not in ("conditional", "pathwise"):
            raise ConfigError(
                f"estimator: expected 'conditional' or 'pathwise', got {estimator!r}"
            )

        return RunConfig(
            instrument=instrument,
            s0=s0,
            sigma=sigma,
            credit=credit,
            lambda_a=lambda_a,
            lambda_b=lambda_b,
            theta=theta,
            rate=rate,
            method=method,
            sweep=sweep,
            estimator=estimator,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
