"""Batch verification runner.

Assembles every machine-checkable identity of the library into suites of
cases, each carrying a stable anchor string naming the theorem it
verifies, and produces a deterministic JSON/CSV report.  Identical
configuration and seed give byte-identical report bodies; wall time and
timestamp live in the separate ``meta`` section.
"""

import csv
import io
import json
import platform
import time
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import modular, oscillator, povm, relativistic, weylnc
from .operators import adjoint, is_effect, opnorm, EFFECT, PROJECTION
from .regions import RegionSet, circle_full, equal_partition

SCHEMA_VERSION = 1

SUITES = ("povm", "gns-modular", "oscillator", "relativistic", "weyl", "all")

# every theorem of the source material must be exercised by at least one
# case; the harness fails its own self-check otherwise
REQUIRED_ANCHORS = (
    "Thm unsharp-observables",
    "Thm Naimark",
    "Thm contraction-POVM",
    "Thm quantum-phase",
    "Thm thermal-L",
    "Lemma modular",
    "Def modular-time",
    "Def covariance",
    "KMS",
    "GNS",
    "Thm thermal-D(1)",
    "Thm thermal-D(2)",
    "Thm thermal-D(3)",
    "eq:weyl",
    "Thm thermal-Dixmier(1)",
    "Thm thermal-Dixmier(2)",
    "Thm thermal-Dixmier(3)",
)


@dataclass
class SuiteConfig:
    suite: str = "all"
    d: int = 12
    n: int = 256
    m: int = 64
    betas: tuple = (0.5, 1.0)
    seed: int = 7
    tol: float = None          # global tolerance override (None: per-case)
    out: str = None
    fmt: str = "json"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.seed is None:
            raise ValueError("a seed is mandatory")
        self.betas = tuple(float(b) for b in self.betas)


class _Cases:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.records = []

    def tol(self, default: float) -> float:
        return self.cfg.tol if self.cfg.tol is not None else default

    def add(self, case, anchor, param, residual, default_tol):
        tol = self.tol(default_tol)
        self.records.append({
            "case": case,
            "anchor": anchor,
            "param": param,
            "residual": float(residual),
            "tol": tol,
            "pass": bool(residual <= tol),
        })

    def add_flag(self, case, anchor, param, ok, note=""):
        # boolean checks are recorded with residual 0/1 against tol 0.5 so
        # the report schema stays uniform
        self.records.append({
            "case": case,
            "anchor": anchor,
            "param": param + (f" [{note}]" if note else ""),
            "residual": 0.0 if ok else 1.0,
            "tol": 0.5,
            "pass": bool(ok),
        })

    def skip(self, case, anchor, param, reason):
        self.records.append({
            "case": case,
            "anchor": anchor,
            "param": param,
            "residual": None,
            "tol": None,
            "pass": True,
            "skipped": reason,
        })


def _rand_complex(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


# --------------------------------------------------------------------------
# suites


def _suite_povm(c: _Cases):
    cfg = c.cfg
    rng = np.random.default_rng(cfg.seed)
    d = min(cfg.d, 8)

    p = povm.random_povm(d, 4, rng)
    rep = povm.povm_validate(p, c.tol(1e-10))
    c.add("povm.random.sum", "Thm unsharp-observables", f"d={d} k=4",
          rep.sum_residual, 1e-10)

    T = _rand_complex(rng, d)
    T = T @ adjoint(T)
    T = T / np.trace(T).real
    probs = povm.state_to_measure(p, T)
    c.add("povm.total-mass", "Thm unsharp-observables", f"d={d}",
          abs(probs.sum() - 1.0), 1e-12)

    arcs = equal_partition(circle_full(), 4)
    phase = povm.DiscretePOVM(regions=arcs,
                              effects=[oscillator.phase_effect(B, d) for B in arcs])
    dil = povm.naimark_dilate(phase)
    rec = max(opnorm(dil.compress(i) - phase.effects[i]) for i in range(4))
    iso = opnorm(adjoint(dil.isometry) @ dil.isometry - np.eye(d))
    c.add("naimark.phase.reconstruction", "Thm Naimark", f"d={d} k=4", rec, 1e-12)
    c.add("naimark.phase.isometry", "Thm Naimark", f"d={d} k=4", iso, 1e-12)
    dil2 = povm.naimark_dilate(p)
    rec2 = max(opnorm(dil2.compress(i) - p.effects[i]) for i in range(4))
    c.add("naimark.random.reconstruction", "Thm Naimark", f"d={d} k=4", rec2, 1e-12)

    fvals = rng.standard_normal(4)
    psi = povm.povm_integrate(p, lambda x: fvals[
        min(int((x + np.pi) / (2 * np.pi / 4)), 3)])
    c.add("psi.contraction", "Thm unsharp-observables", f"d={d}",
          max(0.0, opnorm(psi) - abs(fvals).max()), 1e-10)

    _, rep0 = povm.contraction_moment_povm(np.array([[0.0]]), 32, 64)
    c.add("contraction.zero.moments", "Thm contraction-POVM", "T=0 M=32",
          rep0.moment_residuals[1:].max(), 1e-10)
    _, repr_ = povm.contraction_moment_povm(np.array([[0.5]]), 32, 64)
    pk = _poisson_cell_masses(repr_, 0.5)
    c.add("contraction.poisson.masses", "Thm contraction-POVM", "T=0.5 M=32",
          pk, 1e-2)
    phi = 0.7
    _, repu = povm.contraction_moment_povm(np.array([[np.exp(1j * phi)]]), 32, 64)
    c.add_flag("contraction.unitary.pvm", "Thm contraction-POVM",
               f"T=e^(i{phi})", repu.multiplicative, "multiplicative")


def _poisson_cell_masses(report, r):
    """Worst cell-mass deviation from the Poisson density of radius r."""
    cells = len(report.cell_masses)
    edges = np.linspace(-np.pi, np.pi, cells + 1)
    worst = 0.0
    for i in range(cells):
        # midpoint rule on a fine subgrid of the cell
        sub = np.linspace(edges[i], edges[i + 1], 2001)
        mids = 0.5 * (sub[:-1] + sub[1:])
        dens = (1 - r * r) / (1 - 2 * r * np.cos(mids) + r * r) / (2 * np.pi)
        exact = float(dens.sum() * (sub[1] - sub[0]))
        worst = max(worst, abs(report.cell_masses[i] - exact))
    return worst


def _suite_gns_modular(c: _Cases):
    cfg = c.cfg
    rng = np.random.default_rng(cfg.seed + 1)
    d = min(cfg.d, 6)

    units = [np.eye(2)[:, [i]] @ np.eye(2)[[j], :] for i in range(2) for j in range(2)]
    T2 = np.diag([0.7, 0.3]).astype(complex)
    g = modular.build_gns(units, T2)
    worst = max(abs(g.state(A) - np.vdot(g.omega_vec,
                                         g.represent(A) @ g.omega_vec))
                for A in units)
    c.add("gns.m2.state-identity", "GNS", "M2 faithful", worst, 1e-12)
    c.add_flag("gns.m2.dim", "GNS", f"dim={g.dim}", g.dim == 4 and g.faithful)
    gp = modular.build_gns(units, np.diag([1.0, 0.0]).astype(complex))
    c.add_flag("gns.m2.pure.dim", "GNS", f"dim={gp.dim}",
               gp.dim == 2 and not gp.faithful)

    T = oscillator.gibbs(1.0, d)
    worst = max(modular.kms_residual(T, _rand_complex(rng, d), _rand_complex(rng, d))
                for _ in range(10))
    c.add("kms.gibbs", "KMS", f"beta=1 d={d}", worst, 1e-12)
    c.add("kms.tracial", "KMS", f"beta=0 d={d}",
          modular.kms_residual(np.eye(d) / d, _rand_complex(rng, d),
                               _rand_complex(rng, d)), 1e-12)

    triple = modular.build_modular(oscillator.gibbs(1.0, min(d, 6)))
    c.add("modular.delta.closed-form", "Lemma modular", f"d={triple.d}",
          triple.closed_form_residuals["delta_conjugation"], 1e-8)
    c.add("modular.j.closed-form", "Lemma modular", f"d={triple.d}",
          triple.closed_form_residuals["j_adjoint"], 1e-8)
    worst = max(modular.lemma_modular_residual(triple.T, _rand_complex(rng, triple.d))
                for _ in range(5))
    c.add("modular.lemma", "Lemma modular", f"d={triple.d}", worst, 1e-8)

    Tc = np.diag(np.exp(rng.standard_normal(d))).astype(complex)
    U = np.linalg.qr(_rand_complex(rng, d))[0]
    Tc = U @ Tc @ adjoint(U)
    # the weight is T itself, so [W, T] = 0 and the flow is unitary on H_tau
    w = modular.TraceWeight(Tc)
    rep = modular.modtime_unitarity(w, Tc, [0.0, 0.4, 1.1],
                                    [(_rand_complex(rng, d), _rand_complex(rng, d))])
    c.add("modtime.commuting", "Def modular-time", f"d={d} W=T^beta",
          rep["max_isometry_residual"], 1e-12)
    bad = modular.modtime_unitarity(
        modular.TraceWeight(np.diag([1.0, 2.0]).astype(complex)),
        np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex),
        [1.0], [(np.array([[0, 1], [0, 0]], dtype=complex),) * 2])
    c.add_flag("modtime.counterexample", "Def modular-time", "2x2 [W,T]!=0",
               bad["max_isometry_residual"] >= 1e-3, "detected")


def _suite_oscillator(c: _Cases):
    cfg = c.cfg
    rng = np.random.default_rng(cfg.seed + 2)
    d = max(cfg.d, 12)

    worst = 0.0
    for _ in range(10):
        t = float(rng.uniform(-np.pi, np.pi))
        a = float(rng.uniform(-np.pi, np.pi))
        w = float(rng.uniform(0.1, 2.0))
        B = RegionSet.circle([(a, a + w)])
        worst = max(worst, oscillator.covariance_residual(d, t, B))
    c.add("osc.covariance", "Thm quantum-phase", f"d={d} 10 cases", worst, 1e-10)

    for beta in cfg.betas:
        if beta * d > 20:
            c.skip("osc.thermal", "Thm thermal-L", f"beta={beta} d={d}",
                   "conditioning guard beta*d <= 20")
            continue
        worst = 0.0
        for _ in range(5):
            t = float(rng.uniform(-1.0, 1.0))
            a = float(rng.uniform(-np.pi, np.pi))
            B = RegionSet.circle([(a, a + 1.0)])
            worst = max(worst, oscillator.thermal_covariance_residual(beta, d, t, B))
        c.add("osc.thermal", "Thm thermal-L", f"beta={beta} d={d}", worst, 1e-8)

    info = oscillator.commutator_defect(min(d, 32))
    c.add("osc.defect.rank1", "Thm quantum-phase", f"d={min(d, 32)}",
          info["rank_one_ratio"], 1e-10)
    c.add("osc.weyl-failure", "Thm quantum-phase", "d=8 s=pi t=1",
          max(0.0, 0.1 - oscillator.weyl_failure_check(8, np.pi, 1.0)), 1e-15)

    arcs = equal_partition(circle_full(), 6)
    total = sum(oscillator.phase_effect(B, d) for B in arcs)
    c.add("osc.povm.sum", "Thm unsharp-observables", f"d={d} 6 arcs",
          opnorm(total - np.eye(d)), 1e-12)


def _suite_relativistic(c: _Cases):
    cfg = c.cfg
    rng = np.random.default_rng(cfg.seed + 3)
    n = cfg.n
    grid = relativistic.make_grid(n, 2 * np.pi * 4)
    model = relativistic.HardyModel(grid)

    parts = equal_partition(RegionSet.line([], length=grid.L), 4)
    effects = [relativistic.rel_effect(model, B) for B in parts]
    c.add("rel.povm.sum", "Thm thermal-D(1)", f"n={n} 4 blocks",
          opnorm(sum(effects) - np.eye(model.dim)), 1e-12)
    classes = [is_effect(E, 1e-10) for E in effects]
    c.add_flag("rel.povm.effects", "Thm thermal-D(1)", f"n={n}",
               all(cl in (EFFECT, PROJECTION) for cl in classes))

    A = _rand_complex(rng, n)
    B2 = _rand_complex(rng, n)
    A /= opnorm(A)
    B2 /= opnorm(B2)
    c.add("rel.tau-unitarity", "Thm thermal-D(2)", f"n={n} beta=1 t=0.7",
          relativistic.tau_unitarity_residual(grid, 1.0, 0.7, A, B2), 1e-12)

    Bq = grid.region([(0.0, grid.L / 4)])
    out = relativistic.rel_covariance_residual(model, 1.0, 8 * grid.h, Bq)
    c.add("rel.covariance", "Thm thermal-D(3)", f"n={n} shift=8h",
          out["residual"], 1e-12)
    c.add("rel.covariance.def", "Def covariance", f"n={n} beta=1",
          relativistic.rel_covariance_residual(model, 1.0, 4 * grid.h, Bq)["residual"],
          1e-12)

    coef = rng.standard_normal(model.dim) + 1j * rng.standard_normal(model.dim)
    f = model.modes @ coef
    rep = relativistic.boundary_isometry_check(model, f,
                                               np.logspace(-3, 1, 20))
    c.add("rel.boundary.isometry", "Thm thermal-D(1)", f"n={n}",
          rep["boundary_residual"], 1e-12)
    c.add_flag("rel.boundary.monotone", "Thm thermal-D(1)", f"n={n}",
               rep["monotonicity_violations"] == 0)

    errs = [relativistic.poisson_kernel_error(nn, np.pi * nn / 16)
            for nn in (128, 256, 512, 1024)]
    c.add_flag("rel.poisson.convergence", "Thm thermal-D(1)",
               "4 refinements", all(b < a for a, b in zip(errs, errs[1:])),
               "strictly decreasing")


def _suite_weyl(c: _Cases):
    cfg = c.cfg
    rng = np.random.default_rng(cfg.seed + 4)
    m = cfg.m
    delta = float(np.sqrt(2 * np.pi / m))   # self-dual spacing: delta*Z = dual grid
    lat = weylnc.make_lattice(m, delta, -delta * (m // 2))

    c.add("weyl.relation.exact", "eq:weyl", f"m={m} s=dual t=delta",
          weylnc.weyl_relation_residual(lat, lat.dual_spacing, lat.delta), 1e-12)

    parts = equal_partition(lat.q_region([]), 4)
    effs = [weylnc.nc_effect(lat, B) for B in parts]
    dim = 2 * len(lat.positive_sites)
    c.add("nc.povm.sum", "Thm thermal-Dixmier(1)", f"m={m} 4 cells",
          opnorm(sum(effs) - np.eye(dim)), 1e-12)
    half = parts[0]
    P = weylnc.indicator_Q(lat, half)
    c.add("nc.indicator.projection", "Thm thermal-Dixmier(1)", f"m={m}",
          opnorm(P @ P - P), 1e-12)

    a = _random_symbol(lat, rng)
    t = 2 * lat.dual_spacing
    c.add("nc.conjugation", "Thm thermal-Dixmier(2)", f"m={m} t=2*dual",
          weylnc.conjugation_residual(lat, t, a), 1e-10)
    at = a.translated(lat, t)
    c.add("nc.htau-isometry", "Thm thermal-Dixmier(2)", f"m={m}",
          abs(weylnc.htau_norm(at, lat.x_length) - weylnc.htau_norm(a, lat.x_length)),
          1e-13)
    c.add("nc.integral-invariance", "Thm thermal-Dixmier(2)", f"m={m}",
          abs(weylnc.nc_integral(at, lat.x_length) - weylnc.nc_integral(a, lat.x_length)),
          1e-13)

    out = weylnc.nc_covariance_residual(lat, 3 * lat.dual_spacing, half)
    c.add("nc.covariance", "Thm thermal-Dixmier(3)", f"m={m} t=3*dual",
          out["residual"], 1e-12)
    c.add("nc.covariance.def", "Def covariance", f"m={m}",
          weylnc.nc_covariance_residual(lat, lat.dual_spacing, half)["residual"],
          1e-12)
    c.add("modtime.weighted", "Def modular-time", f"m={m}",
          abs(weylnc.htau_norm(at, lat.x_length) - weylnc.htau_norm(a, lat.x_length)),
          1e-13)


def _random_symbol(lat, rng) -> "weylnc.SymbolRep":
    """Seeded band-limited real symbol with matching principal samples."""
    coeffs = {}
    xs = lat.x_grid
    a0 = np.zeros(lat.m)
    for _ in range(4):
        j = int(rng.integers(1, min(5, lat.m // 2)))
        k = int(rng.integers(0, min(5, lat.m // 2)))
        amp = float(rng.standard_normal())
        coeffs[(j, k)] = 0.5 * amp
        coeffs[(-j, -k)] = 0.5 * amp
        a0 += amp * np.cos(j * lat.delta * xs)
    sym = weylnc.SymbolRep(coeffs=coeffs, a0_pos=a0.copy(), a0_neg=a0.copy())
    return sym


_SUITE_BUILDERS = {
    "povm": _suite_povm,
    "gns-modular": _suite_gns_modular,
    "oscillator": _suite_oscillator,
    "relativistic": _suite_relativistic,
    "weyl": _suite_weyl,
}


def run_suite(cfg: SuiteConfig) -> dict:
    """Run the selected suite(s) and return the report dictionary."""
    start = time.perf_counter()
    cases = _Cases(cfg)
    names = list(_SUITE_BUILDERS) if cfg.suite == "all" else [cfg.suite]
    for name in names:
        _SUITE_BUILDERS[name](cases)
    if cfg.suite == "all":
        seen = {r["anchor"] for r in cases.records}
        missing = [a for a in REQUIRED_ANCHORS if a not in seen]
        if missing:
            raise RuntimeError(f"harness self-check failed: no case for "
                               f"anchors {missing}")
    failed = sum(1 for r in cases.records if not r["pass"])
    report = {
        "schema_version": SCHEMA_VERSION,
        "suite": cfg.suite,
        "config": {"d": cfg.d, "n": cfg.n, "m": cfg.m,
                   "betas": list(cfg.betas), "seed": cfg.seed, "tol": cfg.tol},
        "cases": cases.records,
        "summary": {"total": len(cases.records), "failed": failed},
        "meta": {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "wall_time_s": round(time.perf_counter() - start, 3),
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
    }
    return report


def report_body(report: dict) -> str:
    """Canonical JSON body of a report, excluding the volatile meta
    section (used for the determinism guarantee)."""
    body = {k: v for k, v in report.items() if k != "meta"}
    return json.dumps(body, sort_keys=True, indent=2)


def report_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def report_to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["case", "anchor", "param", "residual", "tol", "pass"])
    for r in report["cases"]:
        writer.writerow([r["case"], r["anchor"], r["param"],
                         r["residual"], r["tol"], r["pass"]])
    return buf.getvalue()


# --------------------------------------------------------------------------
# convergence studies

STUDY_KINDS = ("poisson-kernel", "covariance-interp", "weyl-wrap")


def convergence_study(kind: str, sizes) -> dict:
    """Error-vs-size table for the discretisation-limited checks."""
    if kind not in STUDY_KINDS:
        raise ValueError(f"unknown study kind {kind!r}; choose from {STUDY_KINDS}")
    sizes = [int(s) for s in sizes]
    rows = []
    for s in sizes:
        if kind == "poisson-kernel":
            err = relativistic.poisson_kernel_error(s, np.pi * s / 16)
        elif kind == "covariance-interp":
            err = _covariance_interp_error(s)
        else:
            err = _weyl_wrap_error(s)
        rows.append({"size": s, "error": float(err)})
    if len(rows) < 2:
        monotone = "n/a"
    elif all(b["error"] < a["error"] for a, b in zip(rows, rows[1:])):
        monotone = "decreasing"
    else:
        monotone = "non-monotone"
    return {"kind": kind, "rows": rows, "monotone": monotone}


def _covariance_interp_error(n: int) -> float:
    """Covariance residual at the non-aligned shift 2.5h, measured between
    fixed smooth test states.  The operator-norm mismatch is a half-weight
    atom at the shifted boundary whose compressed norm stays near 1/4 at
    every resolution; only matrix elements against smooth vectors refine.
    """
    grid = relativistic.make_grid(n, 8 * np.pi)
    model = relativistic.HardyModel(grid)
    B = grid.region([(0.0, grid.L / 4)])
    s = 2.5 * grid.h
    E = relativistic.rel_effect(model, B)
    D = np.exp(-1j * s * model.xi)
    conj = (D[:, None] * E) * np.conj(D)[None, :]
    ind = np.array(B.shifted(s).indicator(grid.x))
    V = model.modes
    target = adjoint(V) @ (ind[:, None] * V)
    # fixed functions of xi, so the same states at every resolution
    f = np.exp(-0.2 * model.xi)
    g = np.exp(-0.3 * model.xi) * np.exp(1.3j * model.xi)
    return float(abs(np.vdot(g, (conj - target) @ f)))


def _weyl_wrap_error(m: int) -> float:
    """Wrap-around defect of the Weyl relation at a generic s, measured on
    a normalized Gaussian localized away from the lattice seam."""
    delta = float(np.sqrt(2 * np.pi / m))
    lat = weylnc.make_lattice(m, delta, -delta * (m // 2))
    s, t = 0.37, lat.delta
    St = lat.shift(t)
    Es = lat.exp_P(s)
    defect = Es @ St - np.exp(-1j * s * t) * St @ Es
    g = np.exp(-lat.u ** 2 / 8.0)
    g /= np.linalg.norm(g)
    return float(np.linalg.norm(defect @ g))


def study_to_csv(study: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["size", "error"])
    for r in study["rows"]:
        writer.writerow([r["size"], r["error"]])
    return buf.getvalue()
