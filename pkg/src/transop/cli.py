"""Command line entry point.

    transop <subcommand> --scenario FILE [--tol X] [--eps X] [--n-max N]
                         [--seed N] [--output json|csv]

Subcommands: ``lambda``, ``gibbs``, ``tau``, ``duality``, ``est``, ``props``.
Exit status is 0 when every check passes, 1 when a check fails and 2 on bad
input.  A scenario is a JSON document::

    {"n": 2, "alpha": [1, 0], "operator": [[0, 1, 4.0], [1, 0, 1.0]],
     "potential": [0.0, 0.0], "measure": [0.5, 0.5],
     "eps": 0.1, "n_max": 8, "seed": 0}

Only ``n``, ``alpha`` and ``operator`` are required.  ``"validate_support":
false`` admits an operator that breaks the support rule; only ``props``
accepts such a scenario.
"""
from __future__ import annotations

import argparse
import json
import math
import sys as _sys
from dataclasses import dataclass, field

import numpy as np

from . import core, duality, est, spectral, tentropy, transfer
from .errors import ArgumentError, ConvergenceError, ReducibleOperatorError, TransopError

SUBCOMMANDS = ("lambda", "gibbs", "tau", "duality", "est", "props")
DEFAULTS = {"n_max": 8, "eps": 0.1, "seed": 0}


class ScenarioError(ArgumentError):
    """Invalid scenario document; ``field`` names the offending key."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class Scenario:
    n: int
    alpha: list[int]
    operator: list[tuple[int, int, float]]
    potential: list[float] | None = None
    measure: list[float] | None = None
    eps: float = DEFAULTS["eps"]
    n_max: int = DEFAULTS["n_max"]
    seed: int = DEFAULTS["seed"]
    validate_support: bool = True
    _built: tuple = field(default=None, repr=False, compare=False)

    @property
    def system(self) -> core.FiniteSystem:
        return self._build()[0]

    @property
    def transfer_operator(self) -> transfer.TransferOperator:
        return self._build()[1]

    def _build(self):
        if self._built is None:
            sys = core.FiniteSystem(self.alpha)
            if self.validate_support:
                A = transfer.make_operator(sys, self.operator)
            else:
                m = np.zeros((self.n, self.n))
                for x, y, v in self.operator:
                    m[x, y] += v
                A = transfer.TransferOperator.unchecked(sys, m)
            self._built = (sys, A)
        return self._built

    def phi(self) -> np.ndarray:
        return np.zeros(self.n) if self.potential is None else np.array(self.potential, dtype=float)

    def mu(self) -> core.Measure:
        if self.measure is not None:
            return core.Measure(self.measure)
        return core.invariant_measures(self.system)[0]

    def to_dict(self) -> dict:
        out = {"n": self.n, "alpha": list(self.alpha), "operator": [[x, y, v] for x, y, v in self.operator]}
        for key in ("potential", "measure"):
            if getattr(self, key) is not None:
                out[key] = list(getattr(self, key))
        out.update(eps=self.eps, n_max=self.n_max, seed=self.seed)
        if not self.validate_support:
            out["validate_support"] = False
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _int(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(name, f"expected an integer, got {value!r}")
    return value


def _real(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ScenarioError(name, f"expected a finite number, got {value!r}")
    return float(value)


def _reals(value, name, n):
    if not isinstance(value, list):
        raise ScenarioError(name, "expected an array of numbers")
    if len(value) != n:
        raise ScenarioError(name, f"expected {n} entries, got {len(value)}")
    return [_real(v, f"{name}[{i}]") for i, v in enumerate(value)]


def parse_scenario(text) -> Scenario:
    """Parse and validate a scenario document (bytes or str)."""
    try:
        doc = json.loads(text)
    except (ValueError, UnicodeDecodeError) as exc:
        raise ScenarioError("document", f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("document", "top level must be an object")
    for key in ("n", "alpha", "operator"):
        if key not in doc:
            raise ScenarioError(key, "missing required field")
    known = {"n", "alpha", "operator", "potential", "measure", "eps", "n_max", "seed", "validate_support"}
    extra = sorted(set(doc) - known)
    if extra:
        raise ScenarioError(extra[0], "unknown field")

    n = _int(doc["n"], "n")
    if n < 1:
        raise ScenarioError("n", "must be >= 1")
    alpha = doc["alpha"]
    if not isinstance(alpha, list) or len(alpha) != n:
        raise ScenarioError("alpha", f"expected an array of {n} point indices")
    alpha = [_int(a, f"alpha[{i}]") for i, a in enumerate(alpha)]
    for i, a in enumerate(alpha):
        if not 0 <= a < n:
            raise ScenarioError(f"alpha[{i}]", f"{a} is not a point index")

    validate_support = doc.get("validate_support", True)
    if not isinstance(validate_support, bool):
        raise ScenarioError("validate_support", "expected true or false")
    ops = doc["operator"]
    if not isinstance(ops, list):
        raise ScenarioError("operator", "expected an array of [x, y, value] triplets")
    triplets = []
    for i, t in enumerate(ops):
        name = f"operator[{i}]"
        if not isinstance(t, list) or len(t) != 3:
            raise ScenarioError(name, "expected [x, y, value]")
        x, y, v = _int(t[0], name), _int(t[1], name), _real(t[2], name)
        if not (0 <= x < n and 0 <= y < n):
            raise ScenarioError(name, f"index ({x}, {y}) out of range")
        if v < 0:
            raise ScenarioError(name, f"negative value {v!r} at ({x}, {y})")
        if validate_support and v > 0 and alpha[y] != x:
            raise ScenarioError(name, f"support violation at ({x}, {y}): alpha[{y}] = {alpha[y]}")
        triplets.append((x, y, v))

    sc = Scenario(n, alpha, triplets, validate_support=validate_support)
    if doc.get("potential") is not None:
        sc.potential = _reals(doc["potential"], "potential", n)
    if doc.get("measure") is not None:
        w = _reals(doc["measure"], "measure", n)
        try:
            core.Measure(w)
        except TransopError as exc:
            raise ScenarioError("measure", f"normalization error: {exc}") from None
        sc.measure = w
    if "eps" in doc:
        sc.eps = _real(doc["eps"], "eps")
        if sc.eps <= 0:
            raise ScenarioError("eps", "must be positive")
    if "n_max" in doc:
        sc.n_max = _int(doc["n_max"], "n_max")
        if sc.n_max < 1:
            raise ScenarioError("n_max", "must be >= 1")
    if "seed" in doc:
        sc.seed = _int(doc["seed"], "seed")
    return sc


def _format_number(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 0) -> str:
    """JSON with 17 significant digits; infinities become ``"-inf"``/``"inf"``."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in seq) + "\n" + end + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _format_number(obj)


def _tau_dict(r: tentropy.TauResult) -> dict:
    out = {"tau": r.tau, "route": r.route}
    if r.witness_phi is not None:
        out["witness_phi"] = r.witness_phi
    diag = r.diagnostics
    if "table" in diag:
        out["table"] = [{"n": n, "partition": i, "value": v, "rate": rt} for n, i, v, rt in diag["table"]]
    for key in ("iterations", "grad_norm", "gap", "reason", "t", "objective"):
        if key in diag:
            out[key] = diag[key]
    return out


def _cmd_lambda(sc, opts):
    A = sc.transfer_operator
    r = spectral.spectral_potential(A, sc.phi(), opts.tol or spectral.LAMBDA_TOL)
    return {"lambda": r.lam, "iterations": r.iterations, "residual": r.residual}, True


def _cmd_gibbs(sc, opts):
    A = sc.transfer_operator
    mu = spectral.gibbs_gradient(A, sc.phi(), opts.tol or 1e-8)
    return {"measure": mu.weights, "invariant": core.is_invariant(A.sys, mu, 1e-8)}, True


def _cmd_tau(sc, opts):
    A = sc.transfer_operator
    mu = sc.mu()
    leg = tentropy.tau_legendre(A, mu, tol=opts.tol or 1e-8)
    report = {"measure": mu.weights, "legendre": _tau_dict(leg)}
    if core.is_invariant(A.sys, mu, tentropy.INVARIANCE_TOL):
        direct = tentropy.tau_direct(A, mu, sc.n_max)
        report["direct"] = _tau_dict(direct)
        ok = direct.tau >= leg.tau - 1e-6
    else:
        report["direct"] = None
        ok = True
    report["sandwich"] = ok
    return report, ok


def _cmd_duality(sc, opts):
    A = sc.transfer_operator
    r = duality.duality_check(A, sc.phi(), opts.tol or 1e-5)
    report = {
        "lambda": r.lam,
        "maximizer": r.maximizer.weights,
        "tau_at_maximizer": r.tau_at_maximizer,
        "gap": r.gap,
        "phi": r.phi,
        "pass": r.ok,
    }
    return report, r.ok


def _cmd_est(sc, opts):
    A = sc.transfer_operator
    cfg = est.build_neighborhood(A, sc.mu(), sc.eps, range(1, 41))
    rep = est.est_rate_table(A, cfg)
    report = {
        "eps": cfg.eps,
        "tau": cfg.tau,
        "phi_star": cfg.phi_star,
        "threshold": cfg.threshold,
        "c_estimate": rep.c_estimate,
        "rows": [
            {"n": r.n, "set_size": r.set_size, "log_norm": r.log_norm, "rate": r.rate, "bound": r.bound}
            for r in rep.rows
        ],
        "pass": rep.passed,
    }
    return report, rep.passed, rep


def _cmd_props(sc, opts):
    A = sc.transfer_operator
    rng = np.random.default_rng(sc.seed)
    n = sc.n
    phi = sc.phi()
    psi = rng.uniform(-1.0, 1.0, n)
    t = float(rng.uniform())
    f = rng.uniform(-1.0, 1.0, n)
    checks = {}

    def record(name, fn):
        try:
            checks[name] = bool(fn())
        except TransopError as exc:
            checks[name] = False
            errors[name] = str(exc)

    errors = {}
    record("homological_identity", lambda: transfer.check_homological(A, 20, sc.seed, 1e-12))
    supported = checks["homological_identity"]
    if supported:
        props = spectral.check_lambda_properties(A, phi, psi, t, opts.tol or 1e-7)
        for name in ("monotonicity", "homogeneity", "lipschitz", "convexity", "strong_invariance"):
            checks[name] = getattr(props, name)
        for k in range(1, 6):
            record(f"twist_iterate_n{k}", lambda k=k: transfer.check_twist_iterate(A, phi, f, k, 1e-12))
            record(f"power_inequality_n{k}", lambda k=k: spectral.check_power_inequality(A, phi, k, 1e-9))
        mu = sc.mu()
        if core.is_invariant(A.sys, mu, tentropy.INVARIANCE_TOL):
            D = core.point_partition(A.sys)
            for k in range(1, min(sc.n_max, 4) + 1):
                r = tentropy.inner_sup(A, mu, D, k)
                if r.value > spectral.NEG_INF:
                    checks[f"certificate_n{k}"] = abs(r.certificate - 1.0) <= 1e-8
    report = {"checks": checks}
    if errors:
        report["errors"] = errors
    return report, all(checks.values())


def _csv_flat(report: dict) -> str:
    lines = ["key,value"]

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(obj, (list, tuple, np.ndarray)):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        elif isinstance(obj, str):
            lines.append(f"{prefix},{obj}")
        else:
            lines.append(prefix + "," + _format_number(obj).strip('"'))

    walk("", report)
    return "\n".join(lines) + "\n"


_HANDLERS = {
    "lambda": _cmd_lambda,
    "gibbs": _cmd_gibbs,
    "tau": _cmd_tau,
    "duality": _cmd_duality,
    "est": _cmd_est,
    "props": _cmd_props,
}


@dataclass
class RunOptions:
    tol: float | None = None
    output: str | None = None


def run(subcommand: str, scenario: Scenario, flags: RunOptions | None = None) -> tuple[int, str]:
    """Execute one subcommand; returns ``(exit_code, report_text)``."""
    flags = flags or RunOptions()
    if subcommand not in _HANDLERS:
        return 2, f"error: unknown subcommand {subcommand!r}\n"
    if not scenario.validate_support and subcommand != "props":
        return 2, "error: operator: unchecked support is only accepted by 'props'\n"
    output = flags.output or ("csv" if subcommand == "est" else "json")
    try:
        result = _HANDLERS[subcommand](scenario, flags)
    except (ReducibleOperatorError, ConvergenceError) as exc:
        report = {"subcommand": subcommand, "error": type(exc).__name__, "message": str(exc)}
        return 1, (dumps(report) + "\n") if output == "json" else _csv_flat(report)
    except TransopError as exc:
        return 2, f"error: {exc}\n"
    report, ok = result[0], result[1]
    if output == "csv":
        text = result[2].to_csv() if subcommand == "est" else _csv_flat(report)
    else:
        text = dumps({"subcommand": subcommand, **report}) + "\n"
    return (0 if ok else 1), text


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="transop", description=__doc__.split("\n\n")[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    parser.add_argument("--tol", type=float, help="tolerance (module default if omitted)")
    parser.add_argument("--eps", type=float, help="override scenario eps")
    parser.add_argument("--n-max", type=int, dest="n_max", help="override scenario n_max")
    parser.add_argument("--seed", type=int, help="override scenario seed")
    parser.add_argument("--output", choices=("json", "csv"))
    args = parser.parse_args(argv)
    try:
        with open(args.scenario, "rb") as fh:
            sc = parse_scenario(fh.read())
        if args.eps is not None:
            if args.eps <= 0:
                raise ScenarioError("eps", "must be positive")
            sc.eps = args.eps
        if args.n_max is not None:
            if args.n_max < 1:
                raise ScenarioError("n_max", "must be >= 1")
            sc.n_max = args.n_max
        if args.seed is not None:
            sc.seed = args.seed
        sc._build()
    except OSError as exc:
        _sys.stderr.write(f"error: {exc}\n")
        return 2
    except TransopError as exc:
        _sys.stderr.write(f"error: {exc}\n")
        return 2
    code, text = run(args.subcommand, sc, RunOptions(args.tol, args.output))
    stream = _sys.stdout if code != 2 else _sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
