"""Command-line front end: verification suites, one-off evaluations, model examples.

Report format: a single JSON document.  Exact scalars are serialized as
{"re": [num, den], "im": [num, den], "Vpow": k, "piPow": p} together with a
15-significant-digit numeric rendering; identical config and seed give a
byte-identical report except for the timestamp and per-check elapsed fields
(which --mask-timing zeroes out).

Exit codes: 0 all checks passed, 1 at least one check failed, 2 configuration
or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .almostcommutative import (DoubledOneForm, EymModel, MatrixOneForm,
                                adjoint_trace, doubled_residue,
                                doubled_torsion_free_test, eym_torsion_density)
from .matrices import MatrixQQ
from .qmodels import (QuantumDiscElement, Suq2DiracSpec,
                      suq2_paired_combination, suq2_residue_cancellation,
                      torus_trace_identity, zstar_z)
from .sampling import (random_anti_hermitian_traceless, random_one_form,
                       random_theta, random_torsion, random_torus_h, seeded)
from .scalars import QQi, parse_complex_rational, parse_rational, qi
from .torsion import (OneForm, ResidueValue, TorsionTensor,
                      closed_form_torsion, metric_functional,
                      pipeline_coefficient, torsion_contraction,
                      torsion_functional, volume_functional)

try:
    from importlib.metadata import version as _pkg_version
    VERSION = _pkg_version("spectral-torsion")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.1.0"


class ConfigError(Exception):
    """Invalid configuration or command-line input."""


# serialization -----------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


def format_complex(z: complex) -> str:
    re, im = z.real, z.imag
    if im == 0:
        return _fmt_float(re)
    if re == 0:
        return _fmt_float(im) + "i"
    sign = "+" if im >= 0 else "-"
    return f"{_fmt_float(re)}{sign}{_fmt_float(abs(im))}i"


def scalar_json(value) -> Dict[str, Any]:
    """Exact scalar as rational parts plus pi power and numeric rendering."""
    if isinstance(value, ResidueValue):
        coeff, pipow = value.pi_form()
        display = str(value)
        numeric = value.to_complex()
    else:
        coeff = QQi.coerce(value)
        pipow = 0
        display = str(coeff)
        numeric = coeff.to_complex()
    return {
        "re": [coeff.re.numerator, coeff.re.denominator],
        "im": [coeff.im.numerator, coeff.im.denominator],
        "Vpow": 0,
        "piPow": pipow,
        "numeric": format_complex(numeric),
        "display": display,
    }


# configuration -----------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    which: Optional[str] = None
    dims: List[int] = field(default_factory=list)
    trials: int = 20
    seed: int = 1
    trunc_k: int = 6
    trunc_n: int = 2000
    q: float = 0.5
    phi: QQi = field(default_factory=lambda: qi(1))
    size: int = 2
    torsion: Optional[TorsionTensor] = None
    u: Optional[OneForm] = None
    v: Optional[OneForm] = None
    w: Optional[OneForm] = None
    out: Optional[str] = None
    mask_timing: bool = False

    def echo(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {"command": self.command, "dims": self.dims,
                             "trials": self.trials, "seed": self.seed}
        if self.which:
            d["which"] = self.which
        if self.command == "examples":
            d.update({"K": self.trunc_k, "N": self.trunc_n, "q": self.q,
                      "phi": str(self.phi), "size": self.size})
        if self.torsion is not None:
            d["torsion"] = [{"indices": list(k), "value": str(v)}
                            for k, v in sorted(self.torsion.entries.items())]
        for name, form in (("u", self.u), ("v", self.v), ("w", self.w)):
            if form is not None:
                d[name] = [str(c) for c in form.components]
        return d


def _parse_dims(text: str) -> List[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --dims value {text!r}") from exc
    if not dims:
        raise ConfigError("empty --dims list")
    for n in dims:
        if not (2 <= n <= 8):
            raise ConfigError(f"invalid dimension {n}: need 2 <= n <= 8")
    return dims


def _torsion_from_config(entries, dim: int) -> TorsionTensor:
    parsed = {}
    for item in entries:
        try:
            idx = tuple(int(i) for i in item["indices"])
            val = parse_rational(str(item["value"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed torsion entry {item!r}") from exc
        if len(idx) != 3 or not (idx[0] < idx[1] < idx[2]):
            raise ConfigError(f"non-increasing index triple: {list(idx)}")
        if not all(1 <= i <= dim for i in idx):
            raise ConfigError(f"torsion index out of range for n={dim}: {list(idx)}")
        parsed[idx] = val
    return TorsionTensor(dim, parsed)


def _one_form_from_config(arr, dim: int, name: str) -> OneForm:
    try:
        comps = tuple(parse_rational(str(x)) for x in arr)
    except ValueError as exc:
        raise ConfigError(f"malformed one-form {name}: {arr!r}") from exc
    if len(comps) != dim:
        raise ConfigError(f"one-form {name} has {len(comps)} components, expected {dim}")
    return OneForm(dim, comps)


def load_config(args: argparse.Namespace) -> RunConfig:
    filecfg: Dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                filecfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        if not isinstance(filecfg, dict):
            raise ConfigError("config file must hold a JSON object")

    def pick(flag: str, key: str, default):
        v = getattr(args, flag, None)
        if v is not None:
            return v
        return filecfg.get(key, default)

    cfg = RunConfig(command=args.command)
    cfg.which = getattr(args, "which", None)
    dims_raw = pick("dims", "dims", None)
    if dims_raw is None:
        cfg.dims = [2, 3] if cfg.which == "nctorus" else [3, 4]
    elif isinstance(dims_raw, str):
        cfg.dims = _parse_dims(dims_raw)
    else:
        cfg.dims = _parse_dims(",".join(str(x) for x in dims_raw))
    cfg.trials = int(pick("trials", "trials", 20))
    cfg.seed = int(pick("seed", "seed", 1))
    cfg.trunc_k = int(pick("K", "K", 6))
    cfg.trunc_n = int(pick("N", "N", 2000))
    cfg.q = float(pick("q", "q", 0.5))
    if not (0 < cfg.q < 1):
        raise ConfigError(f"q must lie in (0,1), got {cfg.q}")
    phi_raw = pick("phi", "phi", "1")
    try:
        cfg.phi = parse_complex_rational(str(phi_raw))
    except ValueError as exc:
        raise ConfigError(f"bad phi value {phi_raw!r}") from exc
    cfg.size = int(pick("size", "size", 2))
    cfg.out = pick("out", "out", None)
    cfg.mask_timing = bool(getattr(args, "mask_timing", False))
    if cfg.trials < 1:
        raise ConfigError("trials must be positive")

    dim = cfg.dims[0]
    if "torsion" in filecfg:
        cfg.torsion = _torsion_from_config(filecfg["torsion"], dim)
    for name in ("u", "v", "w"):
        if name in filecfg:
            setattr(cfg, name, _one_form_from_config(filecfg[name], dim, name))
    return cfg


# report assembly ----------------------------------------------------------------

class ReportBuilder:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.checks: List[Dict[str, Any]] = []

    def add(self, name: str, passed: bool, expected=None, computed=None,
            residual: Optional[float] = None, note: Optional[str] = None,
            elapsed: float = 0.0) -> None:
        rec: Dict[str, Any] = {"name": name, "pass": bool(passed)}
        if expected is not None:
            rec["expected"] = expected
        if computed is not None:
            rec["computed"] = computed
        if residual is None:
            rec["exact_equal"] = bool(passed)
        else:
            rec["residual"] = _fmt_float(residual)
        if note:
            rec["note"] = note
        rec["elapsed_ms"] = 0.0 if self.cfg.mask_timing else round(elapsed * 1000, 3)
        self.checks.append(rec)

    def exact(self, name: str, expected, computed, note: Optional[str] = None,
              elapsed: float = 0.0) -> bool:
        passed = expected == computed
        self.add(name, passed, scalar_json(expected), scalar_json(computed),
                 note=note, elapsed=elapsed)
        return passed

    def bounded(self, name: str, residual: float, tol: float,
                note: Optional[str] = None, elapsed: float = 0.0) -> bool:
        passed = residual < tol
        self.add(name, passed, expected=f"< {tol:g}", residual=residual,
                 note=note, elapsed=elapsed)
        return passed

    def report(self) -> Dict[str, Any]:
        passed = sum(1 for c in self.checks if c["pass"])
        return {
            "tool": "spectral-torsion",
            "version": VERSION,
            "config": self.cfg.echo(),
            "checks": self.checks,
            "counts": {"total": len(self.checks), "passed": passed,
                       "failed": len(self.checks) - passed},
            "pass": passed == len(self.checks),
            "timestamp": "" if self.cfg.mask_timing
                         else datetime.now(timezone.utc).isoformat(),
        }


# verify -------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> Dict[str, Any]:
    rb = ReportBuilder(cfg)
    for dim in cfg.dims:
        if dim == 2:
            u, v, w = (OneForm.frame(2, 1) for _ in range(3))
            val = torsion_functional(u, v, w, TorsionTensor.zero(2), 2)
            rb.exact("theorem-equality n=2", ResidueValue(qi(0), 2), val,
                     note="antisymmetric rank-3 tensor vanishes; vacuous")
            continue
        rng = seeded(cfg.seed + dim)
        shape_ok = True
        for trial in range(cfg.trials):
            t = random_torsion(rng, dim)
            u = random_one_form(rng, dim)
            v = random_one_form(rng, dim)
            w = random_one_form(rng, dim)
            t0 = time.perf_counter()
            computed = torsion_functional(u, v, w, t, dim)
            elapsed = time.perf_counter() - t0
            expected = closed_form_torsion(u, v, w, t, dim)
            rb.exact(f"theorem-equality n={dim} trial {trial}", expected,
                     computed, elapsed=elapsed)
            shape = ResidueValue(pipeline_coefficient(dim)
                                 * torsion_contraction(u, v, w, t), dim)
            if shape != computed:
                shape_ok = False
        rb.add(f"pipeline-constant n={dim} ({cfg.trials} trials)", shape_ok,
               expected=str(pipeline_coefficient(dim)) + " * contraction * V",
               note="contraction formula with the constant the calculus produces")
        # frame anchors stated alongside the theorem
        if dim in (3, 4):
            t = TorsionTensor(dim, {(1, 2, 3): Fraction(1)})
            u, v, w = (OneForm.frame(dim, a) for a in (1, 2, 3))
            computed = torsion_functional(u, v, w, t, dim)
            expected = closed_form_torsion(u, v, w, t, dim)
            rb.exact(f"theorem-anchor n={dim} frame triple", expected, computed)
    return rb.report()


# eval ---------------------------------------------------------------------------

def cmd_eval(cfg: RunConfig) -> Dict[str, Any]:
    if cfg.u is None or cfg.v is None or cfg.w is None:
        raise ConfigError("eval needs u, v, w one-forms in the config file")
    dim = cfg.dims[0]
    t = cfg.torsion if cfg.torsion is not None else TorsionTensor.zero(dim)
    rb = ReportBuilder(cfg)
    t0 = time.perf_counter()
    val = torsion_functional(cfg.u, cfg.v, cfg.w, t, dim)
    elapsed = time.perf_counter() - t0
    rb.add(f"eval n={dim}", True, computed=scalar_json(val),
           note=str(val), elapsed=elapsed)
    return rb.report()


# examples -----------------------------------------------------------------------

def _examples_eym(cfg: RunConfig, rb: ReportBuilder) -> None:
    size = cfg.size
    ok = True
    for mu in range(size):
        for nu in range(size):
            if adjoint_trace(MatrixQQ.unit(size, mu, nu)):
                ok = False
    rb.add(f"adjoint-trace-basis size={size}", ok,
           note="Tr ad(E_uv) over the full matrix unit basis")
    rng = seeded(cfg.seed)
    for dim in cfg.dims:
        if dim % 2:
            raise ConfigError(f"eym needs even n, got {dim}")
        for trial in range(min(cfg.trials, 5)):
            gauge = tuple(random_anti_hermitian_traceless(rng, size)
                          for _ in range(dim))
            model = EymModel(dim, size, gauge)
            forms = [MatrixOneForm(dim, tuple(
                random_anti_hermitian_traceless(rng, size) for _ in range(dim)))
                for _ in range(3)]
            t0 = time.perf_counter()
            val = eym_torsion_density(model, *forms)
            elapsed = time.perf_counter() - t0
            rb.exact(f"eym-density n={dim} size={size} trial {trial}",
                     ResidueValue(qi(0), dim), val, elapsed=elapsed)


def _examples_doubled(cfg: RunConfig, rb: ReportBuilder) -> None:
    dim = cfg.dims[0] if cfg.dims else 4
    if dim % 2:
        raise ConfigError(f"doubled model needs even n, got {dim}")
    phi = cfg.phi
    rng = seeded(cfg.seed)
    w1p, w1m = random_one_form(rng, dim), random_one_form(rng, dim)
    w2p, w2m = random_one_form(rng, dim), random_one_form(rng, dim)
    f1p, f1m = qi(Fraction(1, 2)), qi(2)
    f2p, f2m = qi(1), qi(Fraction(-1, 3))
    f3p, f3m = qi(3), qi(1)
    d1 = DoubledOneForm.diagonal(w1p, w1m, phi)
    d2 = DoubledOneForm.diagonal(w2p, w2m, phi)
    d3 = DoubledOneForm.diagonal(random_one_form(rng, dim),
                                 random_one_form(rng, dim), phi)
    o1 = DoubledOneForm.off_diagonal(dim, f1p, f1m, phi)
    o2 = DoubledOneForm.off_diagonal(dim, f2p, f2m, phi)
    o3 = DoubledOneForm.off_diagonal(dim, f3p, f3m, phi)
    zero = ResidueValue(qi(0), dim)

    rb.exact("case-1 diag,diag,diag", zero, doubled_residue(d1, d2, d3))
    case2 = doubled_residue(d1, d2, o3)
    expect2 = (metric_functional(w1p, w2p, dim).scale(f3p)
               + metric_functional(w1m, w2m, dim).scale(f3m)).scale(phi.abs2())
    rb.exact("case-2 diag,diag,off", expect2, case2,
             note="|phi|^2 (g(w1+,w2+) f3+ + g(w1-,w2-) f3-)")
    rb.exact("case-3 diag,off,off", zero, doubled_residue(d1, o2, o3))
    case4 = doubled_residue(o1, o2, o3)
    expect4 = volume_functional(f1p * f2m * f3p + f1m * f2p * f3m,
                                dim).scale(phi.abs2() ** 2)
    rb.exact("case-4 off,off,off", expect4, case4,
             note="|phi|^4 Vol(f1+ f2- f3+ + f1- f2+ f3-)")
    free = doubled_torsion_free_test(phi, dim)
    rb.add("torsion-free iff phi=0", free == (not phi),
           computed=str(free), expected=str(not phi))


def _examples_nctorus(cfg: RunConfig, rb: ReportBuilder) -> None:
    pairs = ((1, 0), (0, -1), (2, -1), (-1, -1))
    tol = 1e-10
    rng = seeded(cfg.seed)
    for dim in cfg.dims:
        theta = random_theta(rng, dim)
        for trial in range(min(cfg.trials, 10)):
            h = random_torus_h(rng, theta)
            j = rng.randint(1, dim)
            for alpha, beta in pairs:
                t0 = time.perf_counter()
                res = torus_trace_identity(h, alpha, beta, j, cfg.trunc_k)
                elapsed = time.perf_counter() - t0
                rb.bounded(
                    f"torus-identity n={dim} h#{trial} (a,b)=({alpha},{beta}) d_{j}",
                    res, tol, elapsed=elapsed)


def _examples_suq2(cfg: RunConfig, rb: ReportBuilder) -> None:
    q, big_n = cfg.q, cfg.trunc_n
    tol = 1e-8
    w = zstar_z(q)
    samples = [("1", QuantumDiscElement.one(q)), ("z", QuantumDiscElement.z(q))]
    samples += [(f"(z*z)^{k}", w.power(k)) for k in (1, 2, 3)]
    for label, x in samples:
        t0 = time.perf_counter()
        rep = suq2_residue_cancellation(x, big_n, tol)
        elapsed = time.perf_counter() - t0
        rb.bounded(f"cancellation x={label}", rep.residual, tol,
                   note=f"tau1={format_complex(rep.tau1)} "
                        f"tau0_up={format_complex(rep.tau0_up)} "
                        f"tau0_dn={format_complex(rep.tau0_dn)}",
                   elapsed=elapsed)
    for (la, xa), (lb, xb) in [(samples[0], samples[2]),
                               (samples[2], samples[3]),
                               (samples[1], samples[2])]:
        res = suq2_paired_combination(xa, xb, big_n, tol)
        rb.bounded(f"paired x={la} y={lb}", res, tol)
    s_fin, s_gro = 3.5, 2.5
    half = Suq2DiracSpec.partial_zeta(s_fin, 100)
    full = Suq2DiracSpec.partial_zeta(s_fin, 200)
    rb.bounded("zeta-finite s=3.5 (tail ratio)", full / half - 1.0, 0.05,
               note=f"S(200)={_fmt_float(full)} S(100)={_fmt_float(half)}")
    half = Suq2DiracSpec.partial_zeta(s_gro, 100)
    full = Suq2DiracSpec.partial_zeta(s_gro, 200)
    rb.add("zeta-growth s=2.5", full / half > 1.3,
           computed=_fmt_float(full / half), expected="> 1.3",
           note=f"S(200)={_fmt_float(full)} S(100)={_fmt_float(half)}")


def cmd_examples(cfg: RunConfig) -> Dict[str, Any]:
    rb = ReportBuilder(cfg)
    runners = {"eym": _examples_eym, "doubled": _examples_doubled,
               "nctorus": _examples_nctorus, "suq2": _examples_suq2}
    if cfg.which not in runners:
        raise ConfigError(f"unknown example {cfg.which!r}")
    runners[cfg.which](cfg, rb)
    return rb.report()


# entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spectral-torsion",
        description="Exact verification of the spectral torsion functional "
                    "and its model computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--dims", help="comma-separated dimensions, e.g. 3,4")
        p.add_argument("--trials", type=int, help="random trials per dimension")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="write the JSON report here as well")
        p.add_argument("--mask-timing", action="store_true",
                       help="zero timestamp/elapsed fields for byte-stable output")

    common(sub.add_parser("verify", help="pipeline vs closed form, per dimension"))
    common(sub.add_parser("eval", help="evaluate one torsion configuration"))
    px = sub.add_parser("examples", help="run one of the model computations")
    px.add_argument("which", choices=["eym", "doubled", "nctorus", "suq2"])
    common(px)
    px.add_argument("--phi", help="doubled-space scalar, e.g. 1+2i or 0")
    px.add_argument("--q", type=float, help="disc deformation parameter in (0,1)")
    px.add_argument("--N", type=int, help="truncation rank / matrix size")
    px.add_argument("--K", type=int, help="series truncation order")
    px.add_argument("--size", type=int, help="gauge matrix size for eym")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args)
        if cfg.command == "verify":
            report = cmd_verify(cfg)
        elif cfg.command == "eval":
            report = cmd_eval(cfg)
        else:
            report = cmd_examples(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2)
    print(text)
    if cfg.out:
        try:
            with open(cfg.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return 2
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
