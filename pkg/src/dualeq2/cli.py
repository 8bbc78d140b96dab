"""Command-line harness running the verification suites.

Exit status: 0 when every identity passes, 1 when some check fails,
2 on a configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Callable

from . import _kernels
from .bosonization import (
    WtildeHandle,
    boson_comult_check,
    boson_relations_check,
    ordinary_pentagon_residual,
    projection_g_check,
    spectrum_checks,
)
from .dual_group import (
    COMULT_GENERATORS,
    DualUnitaryHandle,
    braided_pentagon_residual,
    comult_check,
    seeded_basis_vectors,
    slice_identity_residual,
)
from .lattice import default_window, equal_exact, exact_counterexample
from .operators import all_identities, relation_registry
from .qexp import QexpParams
from .scalars import Deformation

SCHEMA = "dualeq2-report"
SCHEMA_VERSION = 1
SUITES = ("relations", "pentagon", "comult", "slice", "boson")

PENTAGON_VECTORS = 20
COMULT_VECTORS = 10
SLICE_VECTORS = 10
BOSON_VECTORS = 10
DOUBLING_FLOOR = 1e-10


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line configuration."""

    q_re: float = 0.3
    q_im: float = 0.4
    suite: str = "all"
    window: int = 3
    tol: float = 1e-7
    fourier_samples: int = 4096
    coeff_cutoff: float = 1e-15
    seed: int = 0
    report: str = "text"
    out: str | None = None

    def __post_init__(self):
        q = complex(self.q_re, self.q_im)
        if not 0 < abs(q) < 1:
            raise ConfigError(
                f"|q| = {abs(q):.6g} violates the standing assumption 0 < |q| < 1")
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.window < 1:
            raise ConfigError("window must be at least 1")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        M = self.fourier_samples
        if M < 64 or M & (M - 1):
            raise ConfigError("fourier-samples must be a power of two >= 64")
        if not self.coeff_cutoff > 0:
            raise ConfigError("coeff-cutoff must be positive")
        if self.report not in ("text", "json"):
            raise ConfigError("report must be text or json")

    @property
    def q(self) -> complex:
        return complex(self.q_re, self.q_im)

    def params(self, samples: int | None = None) -> QexpParams:
        return QexpParams(self.q, None, samples or self.fourier_samples, self.coeff_cutoff)


@dataclass
class IdentityResult:
    """Result of one identity over all its test vectors."""

    name: str
    statement: str
    mode: str
    passed: bool
    residual: float | str
    error_estimate: float = 0.0
    records: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    """Ordered results of one suite."""

    name: str
    identities: list[IdentityResult]
    timing: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.identities)


_STATEMENTS = {r.name: r.statement for r in all_identities()}


def _numeric_result(name, reports, tol, statement=None, notes=None) -> IdentityResult:
    worst = max((r.residual for r in reports), default=0.0)
    err = max((r.error_estimate for r in reports), default=0.0)
    ok = all(r.passed(tol) for r in reports)
    return IdentityResult(name, statement or _STATEMENTS.get(name, name), "numeric", ok, worst,
                          err, [r.as_dict() for r in reports], notes or {})


def _timed(timing: dict, key: str, fn: Callable):
    t0 = time.perf_counter()
    out = fn()
    timing[key] = time.perf_counter() - t0
    return out


def run_relations(cfg: RunConfig) -> SuiteReport:
    deform = Deformation(cfg.q)
    out, timing = [], {}
    for rec in relation_registry():
        w = max(cfg.window, rec.window or default_window(rec.lhs, rec.rhs))

        def check(rec=rec, w=w):
            cx = exact_counterexample(rec.lhs, rec.rhs, w)
            ok = cx is None and equal_exact(rec.lhs, rec.rhs, w, deform)
            return ok, cx

        ok, cx = _timed(timing, rec.name, check)
        notes = {"window": w}
        if cx is not None:
            notes["counterexample"] = list(cx)
        out.append(IdentityResult(rec.name, rec.statement, "exact", ok, "exact", 0.0, [], notes))
    return SuiteReport("relations", sorted(out, key=lambda r: r.name), timing)


def run_pentagon(cfg: RunConfig) -> SuiteReport:
    vecs = seeded_basis_vectors(PENTAGON_VECTORS, 6, cfg.window, cfg.seed)
    timing = {}
    h1 = DualUnitaryHandle(1.0, cfg.params())
    h2 = DualUnitaryHandle(1.0, cfg.params(2 * cfg.fourier_samples))
    base = _timed(timing, "braided-pentagon", lambda: [braided_pentagon_residual(v, h1) for v in vecs])
    dbl = _timed(timing, "braided-pentagon-doubled",
                 lambda: [braided_pentagon_residual(v, h2) for v in vecs])
    res = _numeric_result("braided-pentagon", base, cfg.tol)
    mono = all(b.residual <= a.residual or b.residual < DOUBLING_FLOOR for a, b in zip(base, dbl))
    conv = IdentityResult(
        "braided-pentagon-doubling", "residual(2M) <= residual(M) or < 1e-10", "numeric", mono,
        max(b.residual for b in dbl), max(b.error_estimate for b in dbl),
        [b.as_dict() for b in dbl], {"fourier_samples": 2 * cfg.fourier_samples})
    return SuiteReport("pentagon", [res, conv], timing)


def run_comult(cfg: RunConfig) -> SuiteReport:
    vecs = seeded_basis_vectors(COMULT_VECTORS, 4, cfg.window, cfg.seed + 1)
    h = DualUnitaryHandle(1.0, cfg.params())
    out, timing = [], {}
    for g in COMULT_GENERATORS:
        name = f"comult-{g.replace('_', '-')}"
        reps = _timed(timing, name, lambda g=g: [comult_check(g, v, h) for v in vecs])
        out.append(_numeric_result(name, reps, cfg.tol))
    return SuiteReport("comult", sorted(out, key=lambda r: r.name), timing)


def _lam_label(lam: complex) -> str:
    lam = complex(lam)
    if lam.imag == 0:
        return f"{lam.real:g}"
    return f"{lam.real:g}{lam.imag:+g}i"


def run_slice(cfg: RunConfig) -> SuiteReport:
    vecs = seeded_basis_vectors(SLICE_VECTORS, 6, cfg.window, cfg.seed + 2)
    h = DualUnitaryHandle(1.0, cfg.params())
    out, timing = [], {}
    for lam in (0.0, 1.0, cfg.q):
        for middle, base in (("P_star", "slice"), ("P", "slice-middle-P")):
            name = f"{base}[lambda={_lam_label(lam)}]"
            reps = _timed(timing, name, lambda lam=lam, middle=middle: [
                slice_identity_residual(lam, v, h, middle) for v in vecs])
            stmt = _STATEMENTS["slice"]
            if middle == "P":
                stmt = stmt.replace("⊗P*⊗", "⊗P⊗")
            out.append(_numeric_result(name, reps, cfg.tol, stmt))
            if lam == 0 and middle == "P_star":
                y = max(r.extra["y13"] for r in reps)
                out.append(IdentityResult("slice-y13[lambda=0]", "S'(0)=Ŷ13", "numeric",
                                          y <= cfg.tol, y))
        conj = [slice_identity_residual(lam, v, h, "P") for v in vecs[:3]]
        for reading in ("psi_hat_star", "psi"):
            worst = max(r.extra[f"conjugated_{reading}"] for r in conj)
            out.append(IdentityResult(
                f"slice-conjugated-{reading.replace('_', '-')}[lambda={_lam_label(lam)}]",
                "(F^λ)*12F23F^λ12F*23=Ψ̂23F^λ12" + ("Ψ̂23*" if reading == "psi_hat_star" else "Ψ23"),
                "numeric", worst <= cfg.tol, worst))
    return SuiteReport("slice", sorted(out, key=lambda r: r.name), timing)


def run_boson(cfg: RunConfig) -> SuiteReport:
    out, timing = [], {}
    for rep in _timed(timing, "relations", boson_relations_check):
        notes = {"counterexample": list(rep.counterexample)} if rep.counterexample else {}
        out.append(IdentityResult(rep.identity, rep.statement, "exact", rep.passed, "exact",
                                  0.0, [], notes))
    spectral = spectrum_checks()
    out.append(IdentityResult("boson-spectrum", "Sp(N')⊂Z, Sp(|b'|)⊂|q|^Z", "exact",
                              all(spectral.values()), "exact", 0.0, [], spectral))
    proj = projection_g_check()
    out.append(IdentityResult("boson-projection-g", "g(u)=u, g(N')=g(b')=0 idempotent", "exact",
                              all(proj.values()), "exact", 0.0, [], proj))
    h = WtildeHandle(cfg.params())
    v9 = seeded_basis_vectors(BOSON_VECTORS, 9, cfg.window, cfg.seed + 3)
    reps = _timed(timing, "boson-pentagon", lambda: [ordinary_pentagon_residual(v, h) for v in v9])
    out.append(_numeric_result("boson-pentagon", reps, cfg.tol))
    v6 = seeded_basis_vectors(BOSON_VECTORS, 6, cfg.window, cfg.seed + 4)
    for g in ("u", "N_prime", "b_prime", "b_prime_star"):
        name = f"boson-comult-{g.replace('_', '-')}"
        reps = _timed(timing, name, lambda g=g: [boson_comult_check(g, v, h) for v in v6])
        out.append(_numeric_result(name, reps, cfg.tol))
        if "corrected" in reps[0].extra:
            worst = max(r.extra["corrected"] for r in reps)
            stmt = ("Δ(b')=b'⊗u*∔q^{N'}⊗b'" if g == "b_prime"
                    else "Δ(b'*)=b'*⊗u∔q̄^{N'}⊗b'*")
            out.append(IdentityResult(name + "-corrected", stmt, "numeric", worst <= cfg.tol,
                                      worst))
    return SuiteReport("boson", sorted(out, key=lambda r: r.name), timing)


RUNNERS = {"relations": run_relations, "pentagon": run_pentagon, "comult": run_comult,
           "slice": run_slice, "boson": run_boson}


def run_suite(cfg: RunConfig) -> list[SuiteReport]:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    return [RUNNERS[n](cfg) for n in names]


def report_dict(cfg: RunConfig, suites: list[SuiteReport]) -> dict:
    """JSON-ready report; everything outside ``volatile`` is deterministic."""
    conf = asdict(cfg)
    conf.pop("out")
    conf.pop("report")
    return {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "config": conf,
        "passed": all(s.passed for s in suites),
        "suites": {
            s.name: {"passed": s.passed, "identities": [asdict(r) for r in s.identities]}
            for s in suites
        },
        "volatile": {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "backend": _kernels.BACKEND,
            "timing": {f"{s.name}/{k}": round(v, 6) for s in suites for k, v in sorted(s.timing.items())},
        },
    }


def _fmt_residual(r) -> str:
    return r if isinstance(r, str) else f"{r:.3e}"


def render_text(cfg: RunConfig, suites: list[SuiteReport]) -> str:
    lines = [f"q = {cfg.q}  tol = {cfg.tol:g}  M = {cfg.fourier_samples}  seed = {cfg.seed}"]
    for s in suites:
        lines.append(f"[{'PASS' if s.passed else 'FAIL'}] suite {s.name}")
        for r in s.identities:
            tag = "PASS" if r.passed else "FAIL"
            lines.append(f"  {tag} {r.name:<42} {_fmt_residual(r.residual):>10}  {r.statement}")
    ok = all(s.passed for s in suites)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def list_identities() -> str:
    """Every registered identity with its statement, one per line."""
    return "".join(f"{r.name}\t{r.mode}\t{r.statement}\n" for r in all_identities())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualeq2", description=__doc__.splitlines()[0])
    p.add_argument("--q-re", type=float, default=0.3)
    p.add_argument("--q-im", type=float, default=0.4)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--window", type=int, default=3,
                   help="coordinate range of seeded test vectors; minimum exact window")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--fourier-samples", type=int, default=4096)
    p.add_argument("--coeff-cutoff", type=float, default=1e-15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--list-identities", action="store_true",
                   help="print the identity registry and exit")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_identities:
        sys.stdout.write(list_identities())
        return 0
    try:
        cfg = RunConfig(args.q_re, args.q_im, args.suite, args.window, args.tol,
                        args.fourier_samples, args.coeff_cutoff, args.seed, args.report, args.out)
    except ConfigError as exc:
        print(f"dualeq2: config error: {exc}", file=sys.stderr)
        return 2
    suites = run_suite(cfg)
    if cfg.report == "json":
        text = json.dumps(report_dict(cfg, suites), indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    else:
        text = render_text(cfg, suites)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(s.passed for s in suites) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
