"""Batch command-line front end.

Every subcommand produces a payload {meta, rows, checks} written as JSON
(default) or CSV.  Parameters come from flags and from an optional JSON
config file; flags win.  Exit codes: 0 ok, 1 a check failed, 2 bad input,
3 numerical degeneracy.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

import numpy as np

from . import __version__, checks, contour, nekrasov, potential, residue_comb, virasoro
from .errors import DegenerateFactor, GridViolation, InadmissibleParameters, InstantonError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3
GLOBAL_KEYS = ("format", "out", "threads", "seed", "timing")


class InputError(ValueError):
    pass


# -- value conversion -------------------------------------------------------

def to_complex(v) -> complex:
    if isinstance(v, dict):
        if set(v) != {"re", "im"}:
            raise InputError(f"complex object needs exactly the keys re and im, got {sorted(v)}")
        z = complex(float(v["re"]), float(v["im"]))
    elif isinstance(v, (list, tuple)) and len(v) == 2:
        z = complex(float(v[0]), float(v[1]))
    elif isinstance(v, bool):
        raise InputError("boolean given where a number is expected")
    elif isinstance(v, (int, float, complex)):
        z = complex(v)
    elif isinstance(v, str):
        try:
            z = complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise InputError(f"cannot read {v!r} as a complex number") from None
    else:
        raise InputError(f"cannot read {v!r} as a complex number")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(f"non-finite value {v!r}")
    return z


def to_real(v) -> float:
    z = to_complex(v)
    if z.imag != 0:
        raise InputError(f"expected a real number, got {v!r}")
    return z.real


def to_int(v) -> int:
    x = to_real(v)
    if x != int(x):
        raise InputError(f"expected an integer, got {v!r}")
    return int(x)


def _listify(v) -> list:
    if isinstance(v, str):
        return [s for s in v.split(",") if s.strip()] if v.strip() else []
    if isinstance(v, (list, tuple)):
        return list(v)
    return [v]


def complex_list(v) -> tuple:
    return tuple(to_complex(x) for x in _listify(v))


def int_list(v) -> tuple:
    return tuple(to_int(x) for x in _listify(v))


def to_arith(v):
    if v in ("auto", "double"):
        return v
    try:
        digits = to_int(v)
    except InputError:
        raise InputError(f"arith must be auto, double or a digit count >= 15, got {v!r}") from None
    if digits < 15:
        raise InputError(f"arith digit count must be >= 15, got {digits}")
    return digits


def choice(*options) -> Callable:
    def conv(v):
        if v not in options:
            raise InputError(f"{v!r} is not one of {', '.join(options)}")
        return v
    return conv


def encode(v):
    """JSON-safe value: complex -> {re, im}, non-finite floats -> null."""
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": encode(float(v.real)), "im": encode(float(v.imag))}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, dict):
        return {k: encode(x) for k, x in v.items()}
    return v


# -- commands ---------------------------------------------------------------
# Each command: params {name: (converter, default, help)}, columns, run(params, ctx).

class Payload:
    def __init__(self, columns: list[tuple[str, str]]):
        self.columns = columns          # (name, kind) with kind in {"complex", "scalar"}
        self.rows: list[dict] = []
        self.checks: list[dict] = []

    def row(self, **values) -> None:
        self.rows.append(values)

    def check(self, name: str, passed: bool, detail: str, seconds: float | None = None) -> None:
        entry = {"name": name, "pass": bool(passed), "detail": detail}
        if seconds is not None:
            entry["seconds"] = seconds
        self.checks.append(entry)


def _mult_params(p) -> nekrasov.MultiplicativeParams:
    return nekrasov.MultiplicativeParams(p["q1"], p["q2"], p["u"], p["p"])


def _root(z: complex, n: int) -> float:
    return abs(z) ** (1.0 / n) if n > 0 else float("nan")


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


MULT_PARAMS = {
    "q1": (to_complex, 0.3, "first deformation parameter"),
    "q2": (to_complex, 0.2, "second deformation parameter"),
    "u": (complex_list, "1", "comma-separated u vector"),
    "p": (complex_list, "", "comma-separated matter vector p (may be empty)"),
}


def run_coeffs(p: dict, ctx: dict) -> Payload:
    out = Payload([("n", "scalar"), ("Z", "complex"), ("root", "scalar"), ("bound", "scalar")]
                  + ([("nm_rel_diff", "scalar"), ("cancellation", "scalar")] if p["precision"] else []))
    if p["family"] == "exponential":
        ep = nekrasov.ExponentialParams(p["lam"], p["eps1"], p["eps2"], p["a"], p["w"])
        ep.check_admissible()
        mp = ep.to_multiplicative()
    else:
        mp = _mult_params(p)
    mp.check_admissible()
    viol = nekrasov.check_grid(mp, p["nmax"])
    if viol:
        raise GridViolation(f"grid conditions violated: {viol}", viol)
    bound = nekrasov.radius_bound(mp)
    for n in range(p["nmax"] + 1):
        if p["family"] == "exponential":
            z = nekrasov.zn_exponential(ep, n, p["arith"])
        else:
            z = nekrasov.zn_multiplicative(mp, n, p["form"], p["arith"])
        extra = {}
        if p["precision"]:
            extra["nm_rel_diff"] = _rel(nekrasov.zn_multiplicative(mp, n, "N", p["arith"]),
                                        nekrasov.zn_multiplicative(mp, n, "M", p["arith"]))
            extra["cancellation"] = nekrasov.cancellation_ratio(mp, n)
        out.row(n=n, Z=z, root=_root(z, n), bound=bound, **extra)
    out.check("admissible", True, "integral-side hypotheses hold")
    if p["precision"]:
        worst = max(r["nm_rel_diff"] for r in out.rows)
        out.check("n_form_vs_m_form", worst <= 1e-10, f"max relative difference {worst:.3e}")
        # the ratio is measured on double-precision terms; other modes absorb it
        cond = max(r["cancellation"] for r in out.rows)
        est = cond * 2.2e-16
        if p["arith"] == "double":
            out.check("conditioning", est <= 1e-8, f"max cancellation ratio {cond:.3e} (relative error estimate {est:.1e})")
        else:
            out.check("conditioning", True,
                      f"max cancellation ratio {cond:.3e}; double estimate {est:.1e} absorbed by {p['arith']} arithmetic")
    return out


def run_quad(p: dict, ctx: dict) -> Payload:
    out = Payload([("n", "scalar"), ("quadrature", "complex"), ("est_error", "scalar"),
                   ("fixed_point", "complex"), ("rel_diff", "scalar")])
    mp = _mult_params(p)
    mp.check_admissible()
    rho = p["rho"] if p["rho"] is not None else contour.choose_rho(mp).rho
    for n in range(1, p["nmax"] + 1):
        res = contour.zn_quadrature(mp, n, M=p["M"], rho=rho, n_max=p["nmax"])
        fp = nekrasov.zn_multiplicative(mp, n)
        out.row(n=n, quadrature=res.value, est_error=res.est_error, fixed_point=fp, rel_diff=_rel(res.value, fp))
    worst = max((r["rel_diff"] for r in out.rows), default=0.0)
    out.check("quadrature_vs_fixed_points", worst <= p["tol"], f"max relative difference {worst:.3e} at rho = {rho:.6g}")
    return out


def _Q_from_h(h: complex) -> complex:
    s = (h + cmath.sqrt(h * h - 4)) / 2
    return s * s


def run_gaiotto(p: dict, ctx: dict) -> Payload:
    out = Payload([("n", "scalar"), ("kac", "complex"), ("agt", "complex"),
                   ("rel_diff", "scalar"), ("bound", "scalar")])
    q, t = p["q"], p["t"]
    if p["h"] is not None:
        h = p["h"]
        Q = _Q_from_h(h)
    else:
        Q = p["Q"]
        h = virasoro.weight_from_Q(Q)
    radius = virasoro.gaiotto_radius(q, t)
    ap = virasoro.AlgebraParams(q, t, h)
    out.row(n=0, kac=1.0 + 0j, agt=1.0 + 0j, rel_diff=0.0, bound=radius)
    for n in range(1, p["nmax"] + 1):
        kac = virasoro.gaiotto_norm_coefficient(n, ap, level_cap=max(p["nmax"], 1))
        agt = (t / q) ** n * nekrasov.zn_gaiotto(q, t, Q, n)
        out.row(n=n, kac=kac, agt=agt, rel_diff=_rel(kac, agt), bound=radius)
    worst = max(r["rel_diff"] for r in out.rows)
    out.check("agt_identity", worst <= p["tol"], f"max relative difference {worst:.3e}")
    out.check("kac_distance", True, f"distance to nearest Kac zero {virasoro.kac_distance(ap, p['nmax']):.3e}")
    return out


def run_potential(p: dict, ctx: dict) -> Payload:
    out = Payload([("k", "scalar"), ("closed_form", "complex"), ("quadrature", "complex"), ("abs_diff", "scalar")])
    q1, q2 = p["q1"], p["q2"]
    nekrasov.MultiplicativeParams(q1, q2, (1,)).check_admissible()
    for k in range(-p["kmax"], p["kmax"] + 1):
        closed = potential.fourier_f(k, q1, q2)
        quad = potential.fourier_f_quadrature(k, q1, q2)
        out.row(k=k, closed_form=closed, quadrature=quad, abs_diff=abs(closed - quad))
    worst = max(r["abs_diff"] for r in out.rows)
    c0 = abs(next(r["quadrature"] for r in out.rows if r["k"] == 0))
    ck = min(r["quadrature"].real for r in out.rows if r["k"] != 0)
    out.check("closed_form", worst <= 1e-7, f"max absolute difference {worst:.3e}")
    out.check("c0_vanishes", c0 < 1e-8, f"|c_0| = {c0:.3e}")
    out.check("ck_positive", ck > 0, f"min c_k over k != 0 is {ck:.6g}")
    return out


H_FUNCS = {"cos": np.cos, "sin": np.sin, "cos2": lambda th: np.cos(2 * th)}


def run_loggas(p: dict, ctx: dict) -> Payload:
    out = Payload([("n", "scalar"), ("estimate", "scalar"), ("stderr", "scalar"), ("acceptance_rate", "scalar"),
                   ("mixing_ok", "scalar"), ("records", "scalar")])
    q1, q2 = p["q1"], p["q2"]
    nekrasov.MultiplicativeParams(q1, q2, (1,)).check_admissible()
    h = H_FUNCS[p["h_func"]]

    def one(n: int):
        seed = int(np.random.SeedSequence([ctx["seed"], n]).generate_state(1)[0])
        cfg = potential.LogGasConfig(n=n, q1=q1, q2=q2, steps=p["sweeps"] * n, burn_in=p["burn_in"] * n,
                                     seed=seed, chains=p["chains"])
        return n, potential.estimate_h_limit(h, cfg)

    with ThreadPoolExecutor(max_workers=ctx["threads"]) as pool:
        results = list(pool.map(one, p["n"]))
    for n, est in results:
        out.row(n=n, estimate=est.value, stderr=est.stderr, acceptance_rate=est.acceptance_rate,
                mixing_ok=est.mixing_ok, records=est.records)
    bad = [n for n, est in results if not est.mixing_ok]
    out.check("mixing", not bad, f"acceptance outside [0.05, 0.98] at n = {bad}" if bad else "all chains mix")
    return out


def run_appendix(p: dict, ctx: dict) -> Payload:
    out = Payload([("J", "scalar"), ("l0", "scalar"), ("cancellation_sum", "scalar")])
    if p["jmax"] < 1:
        raise InputError("jmax must be at least 1")
    bad = []
    for J in range(1, p["jmax"] + 1):
        for l0 in range(J):
            val = residue_comb.cancellation_sum(J, l0)
            out.row(J=J, l0=l0, cancellation_sum=val)
            if l0 >= 1 and val != 0:
                bad.append((J, l0))
    out.check("cancellation_sum", not bad, f"nonzero at {bad}" if bad else "zero for every l0 >= 1")
    ok, detail = checks.telescoping(seed=ctx["seed"], draws=p["draws"])
    out.check("telescoping", ok, detail)
    return out


def run_verify(p: dict, ctx: dict) -> Payload:
    out = Payload([("name", "scalar"), ("pass", "scalar"), ("detail", "scalar")]
                  + ([("seconds", "scalar")] if ctx["timing"] else []))
    for res in checks.run_suite(p["suite"], threads=ctx["threads"]):
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name} ({res.seconds:.3f} s): {res.detail}", file=sys.stderr)
        seconds = res.seconds if ctx["timing"] else None
        extra = {"seconds": seconds} if ctx["timing"] else {}
        out.row(name=res.name, **{"pass": res.passed}, detail=res.detail, **extra)
        out.check(res.name, res.passed, res.detail, seconds)
    return out


COMMANDS: dict[str, dict[str, Any]] = {
    "coeffs": {
        "help": "fixed-point coefficients Z_n with root statistic and bound",
        "run": run_coeffs,
        "params": {
            "family": (choice("multiplicative", "exponential"), "multiplicative", "parameter family"),
            **MULT_PARAMS,
            "lam": (to_real, 1.0, "lambda (exponential family)"),
            "eps1": (to_complex, 1.0, "epsilon_1 (exponential family)"),
            "eps2": (to_complex, 2 ** 0.5, "epsilon_2 (exponential family)"),
            "a": (complex_list, "0", "comma-separated Coulomb vector a (exponential family)"),
            "w": (complex_list, "", "comma-separated masses w (exponential family)"),
            "form": (choice("N", "M"), "N", "closed form of the fixed-point terms"),
            "nmax": (to_int, 5, "largest order n"),
            "precision": (bool, False, "also report N-form vs M-form agreement"),
            "arith": (to_arith, "auto", "auto, double, or a decimal digit count for the fixed-point sums"),
        },
    },
    "quad": {
        "help": "torus quadrature of Z_n against the fixed-point sum",
        "run": run_quad,
        "params": {
            **MULT_PARAMS,
            "nmax": (to_int, 2, "largest order n (cost grows as M^n)"),
            "M": (to_int, 128, "grid points per circle"),
            "rho": (lambda v: None if v is None else to_real(v), None, "contour radius (default: geometric mean)"),
            "tol": (to_real, 1e-8, "relative tolerance for the check"),
        },
    },
    "gaiotto": {
        "help": "Gaiotto norm coefficients by Kac inversion and by the pair-of-partitions sum",
        "run": run_gaiotto,
        "params": {
            "q": (to_complex, 3.0, "q with |q| > 1"),
            "t": (to_complex, 0.3, "t with |t| < 1"),
            "Q": (to_complex, 0.9 * cmath.exp(0.3j), "Coulomb parameter Q"),
            "h": (lambda v: None if v is None else to_complex(v), None, "highest weight (overrides Q)"),
            "nmax": (to_int, 3, "largest level"),
            "tol": (to_real, 1e-8, "relative tolerance for the check"),
        },
    },
    "potential": {
        "help": "Fourier coefficients of the pair potential",
        "run": run_potential,
        "params": {
            "q1": (to_complex, 0.3, "first parameter"),
            "q2": (to_complex, 0.2, "second parameter"),
            "kmax": (to_int, 8, "largest |k|"),
        },
    },
    "loggas": {
        "help": "Monte Carlo estimate of (1/n) log E exp(sum h(theta_j))",
        "run": run_loggas,
        "params": {
            "q1": (to_complex, 0.3, "first parameter"),
            "q2": (to_complex, 0.2, "second parameter"),
            "n": (int_list, "16,32", "comma-separated particle numbers"),
            "sweeps": (to_int, 200, "sweeps per chain (a sweep is n single-site updates)"),
            "burn_in": (to_int, 50, "burn-in sweeps"),
            "chains": (to_int, 16, "independent chains"),
            "h_func": (choice(*H_FUNCS), "cos", "test function h"),
        },
    },
    "appendix-check": {
        "help": "signed strip-weight sums and the telescoping identity",
        "run": run_appendix,
        "params": {
            "jmax": (to_int, 8, "largest strip length J"),
            "draws": (to_int, 100, "random tuples for the telescoping identity"),
        },
    },
    "verify": {
        "help": "run a fixed-seed invariant suite",
        "run": run_verify,
        "params": {
            "suite": (choice(*checks.SUITES, "all"), "all", "suite name"),
        },
    },
}


# -- output -----------------------------------------------------------------

def to_json(payload: Payload, meta: dict) -> str:
    doc = {"meta": encode(meta), "rows": encode(payload.rows), "checks": encode(payload.checks)}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ""
    return str(v)


def to_csv(payload: Payload) -> str:
    header = []
    for name, kind in payload.columns:
        header += [f"{name}_re", f"{name}_im"] if kind == "complex" else [name]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in payload.rows:
        cells = []
        for name, kind in payload.columns:
            v = row.get(name)
            if kind == "complex":
                z = complex(v) if v is not None else None
                cells += [_csv_cell(z.real), _csv_cell(z.imag)] if z is not None else ["", ""]
            else:
                cells.append(_csv_cell(v))
        w.writerow(cells)
    return buf.getvalue()


# -- argument handling ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="instanton", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, spec in COMMANDS.items():
        sp = sub.add_parser(name, help=spec["help"], argument_default=argparse.SUPPRESS)
        sp.add_argument("--config", help="JSON config file; flags override its values")
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--threads", type=int, help="cap on worker threads")
        sp.add_argument("--seed", type=int, help="base seed")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timings in the output")
        for key, (conv, default, help_) in spec["params"].items():
            flag = "--" + key.replace("_", "-")
            if conv is bool:
                sp.add_argument(flag, dest=key, action="store_true", help=help_)
            else:
                sp.add_argument(flag, dest=key, help=f"{help_} (default: {default})")
    return parser


def resolve(command: str, args: dict, config: dict) -> tuple[dict, dict]:
    """Merge defaults < config file < flags; returns (params, context)."""
    spec = COMMANDS[command]["params"]
    unknown = set(config) - set(spec) - set(GLOBAL_KEYS)
    if unknown:
        raise InputError(f"unknown config keys for {command}: {sorted(unknown)}")
    merged = {k: v[1] for k, v in spec.items()}
    merged.update({k: v for k, v in config.items() if k in spec})
    merged.update({k: v for k, v in args.items() if k in spec})
    params = {}
    for key, (conv, _, _) in spec.items():
        val = merged[key]
        params[key] = bool(val) if conv is bool else conv(val)
    ctx = {"format": "json", "out": None, "threads": 1, "seed": 0, "timing": False}
    ctx.update({k: config[k] for k in GLOBAL_KEYS if k in config})
    ctx.update({k: args[k] for k in GLOBAL_KEYS if k in args})
    if ctx["format"] not in ("json", "csv"):
        raise InputError(f"format must be json or csv, got {ctx['format']!r}")
    ctx["threads"] = to_int(ctx["threads"])
    ctx["seed"] = to_int(ctx["seed"])
    if ctx["threads"] < 1:
        raise InputError("threads must be at least 1")
    return params, ctx


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def execute(argv: list[str] | None = None) -> tuple[int, str | None, dict | None]:
    """Run the CLI and return (exit code, rendered output, context)."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None, None
    args = vars(ns)
    command = args.pop("command")
    try:
        config = _load_config(args.pop("config", None))
        params, ctx = resolve(command, args, config)
        t0 = time.perf_counter()
        payload = COMMANDS[command]["run"](params, ctx)
        elapsed = time.perf_counter() - t0
    except (InputError, InadmissibleParameters) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None, None
    except DegenerateFactor as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE, None, None
    except (InstantonError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None, None
    meta = {"version": __version__, "seed": ctx["seed"], "command": command, "params": params}
    if ctx["timing"]:
        meta["seconds"] = elapsed
    text = to_json(payload, meta) if ctx["format"] == "json" else to_csv(payload)
    code = EXIT_OK if all(c["pass"] for c in payload.checks) else EXIT_FAIL
    return code, text, ctx


def main(argv: list[str] | None = None) -> int:
    code, text, ctx = execute(argv)
    if text is not None:
        if ctx["out"]:
            with open(ctx["out"], "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
