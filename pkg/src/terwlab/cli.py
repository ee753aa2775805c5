"""Command-line interface.

Subcommands: gen, validate, analyze, predict, decompose, multiplicities,
qs, verify.  Reports go to stdout (human-readable tables by default, JSON
with --json); diagnostics go to stderr.  Exit codes: 0 all checks passed,
1 a check failed, 2 input error.  JSON reports carry a schema tag and,
given the same scheme, vertex and seed, are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import generators, multiplicity, predictor, qs
from .context import build_context, verify_operator_identities
from .decomposer import census as module_census
from .decomposer import decompose as decompose_standard_module
from .decomposer import measure_all, norm_ladder_check
from .errors import (
    AxiomViolation,
    InvalidParameter,
    OrderingMissing,
    OutOfRange,
    ParseError,
    TerwLabError,
)
from .spectral import is_almost_bipartite, spectral_data

SCHEMA = "terw-lab/1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _emit(doc: dict, as_json: bool, render_text) -> None:
    if as_json:
        print(json.dumps({"schema": SCHEMA, **doc}, sort_keys=True))
    else:
        render_text(doc)


def _load(path):
    return generators.load_scheme(path)


# ---------------------------------------------------------------- verify

@dataclass
class VerifyCheck:
    name: str
    status: str           # pass / fail / skip
    residual: float | None = None
    detail: str | None = None
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        doc = {"name": self.name, "status": self.status}
        if self.residual is not None:
            doc["residual"] = self.residual
        if self.detail is not None:
            doc["detail"] = self.detail
        return doc


@dataclass
class VerifyReport:
    scheme_path: str
    vertex: int
    seed: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def as_dict(self) -> dict:
        # elapsed times are intentionally left out: reports must be
        # byte-identical for identical (scheme, vertex, seed)
        return {
            "scheme": self.scheme_path,
            "vertex": self.vertex,
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
            "verdict": "pass" if self.passed else "fail",
        }

    def render_text(self) -> str:
        lines = [f"verify {self.scheme_path} (vertex={self.vertex}, seed={self.seed})"]
        for c in self.checks:
            residual = "" if c.residual is None else f"  residual={c.residual:.3e}"
            detail = "" if c.detail is None else f"  [{c.detail}]"
            lines.append(f"  {c.status.upper():4s}  {c.name:28s}{residual}{detail}  ({c.elapsed:.2f}s)")
        lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def run_verify(scheme_path: str, vertex: int = 0, seed: int = 0, tol: float | None = None) -> VerifyReport:
    """Run the full verification pipeline on one scheme file.

    Stages: axiom validation, P/Q ordering detection, almost-bipartite
    test, operator identities, oracle decomposition, per-module structure
    checks, predictor-vs-oracle comparison, the trace identity over the
    feasible grid, the multiplicity recurrence against the census, and the
    q,s model (skipped for the excluded families).  Every stage failure is
    recorded and later stages that lost their inputs are skipped.
    """
    report = VerifyReport(scheme_path=str(scheme_path), vertex=vertex, seed=seed, checks=[])
    checks = report.checks

    def stage(name):
        # decorator-as-runner: executes the stage body at definition time
        # and binds its payload to the decorated name
        def wrap(fn):
            t0 = time.perf_counter()
            try:
                status, residual, detail, value = fn()
            except ParseError:
                raise  # unreadable input is not a check failure
            except TerwLabError as exc:
                checks.append(VerifyCheck(name, "fail", detail=f"{type(exc).__name__}: {exc}",
                                          elapsed=time.perf_counter() - t0))
                return None
            checks.append(VerifyCheck(name, status, residual, detail,
                                      elapsed=time.perf_counter() - t0))
            return value
        return wrap

    def skip(name, reason):
        checks.append(VerifyCheck(name, "skip", detail=reason))

    identity_tol = tol if tol is not None else None

    @stage("axioms")
    def scheme():
        s = _load(scheme_path)
        return "pass", None, f"n={s.n} D={s.D}", s

    if scheme is None:
        for name in ("pq_orderings", "almost_bipartite", "operator_identities", "decomposition",
                     "module_structure", "predictor_vs_oracle", "trace_formula",
                     "multiplicity_recurrence", "qs_engine"):
            skip(name, "scheme unavailable")
        return report

    @stage("pq_orderings")
    def spectral():
        sp = spectral_data(scheme)
        if not sp.is_q_polynomial:
            raise OrderingMissing("no Q-polynomial ordering")
        detail = f"p_ordering={list(sp.p_ordering)} q_ordering={list(sp.q_ordering)}"
        return "pass", None, detail, sp

    if spectral is None:
        for name in ("almost_bipartite", "operator_identities", "decomposition",
                     "module_structure", "predictor_vs_oracle", "trace_formula",
                     "multiplicity_recurrence", "qs_engine"):
            skip(name, "spectral data unavailable")
        return report

    almost_bip = is_almost_bipartite(spectral.pp)

    @stage("almost_bipartite")
    def _ab():
        return "pass", None, f"almost_bipartite={almost_bip}", almost_bip

    @stage("operator_identities")
    def ctx():
        c = build_context(scheme, spectral, vertex)
        rep = verify_operator_identities(c, tol=identity_tol)
        if not rep.all_passed:
            bad = [chk.name for chk in rep.checks if not chk.passed]
            return "fail", rep.max_residual, f"failed: {bad}", c
        return "pass", rep.max_residual, None, c

    if ctx is None:
        for name in ("decomposition", "module_structure", "predictor_vs_oracle",
                     "trace_formula", "multiplicity_recurrence", "qs_engine"):
            skip(name, "context unavailable")
        return report

    @stage("decomposition")
    def modules():
        kwargs = {"seed": seed} if tol is None else {"seed": seed, "tol": tol}
        mods = measure_all(ctx, decompose_standard_module(ctx, **kwargs))
        return "pass", None, f"{len(mods)} modules, census={_census_str(module_census(mods))}", mods

    if modules is None:
        for name in ("module_structure", "predictor_vs_oracle", "trace_formula",
                     "multiplicity_recurrence", "qs_engine"):
            skip(name, "decomposition unavailable")
        return report

    @stage("module_structure")
    def _structure():
        D = spectral.D
        worst = 0.0
        for mod in modules:
            if not (mod.thin and mod.dual_thin and mod.d == mod.dstar):
                return "fail", None, f"module ({mod.t},{mod.d}) not thin/dual-thin", None
            if mod.r + mod.d != D or 2 * mod.t + mod.d < D:
                return "fail", None, f"endpoint identities fail at ({mod.t},{mod.d})", None
            ladder = norm_ladder_check(ctx, mod)
            if not ladder.all_positive:
                return "fail", None, f"nonpositive ladder product at ({mod.t},{mod.d})", None
            worst = max(worst, ladder.primal_residual, ladder.dual_residual)
        return "pass", worst, None, True

    @stage("predictor_vs_oracle")
    def _predictor():
        worst = 0.0
        eig_worst = 0.0
        for mod in modules:
            mc = predictor.module_class(mod.t, mod.d, spectral)
            worst = max(
                worst,
                float(np.abs(mod.measured_B - mc.B).max()),
                float(np.abs(mod.measured_Bstar - mc.Bstar).max()),
            )
            fr = predictor.feasibility(mc, spectral.theta, spectral.theta_star)
            eig_worst = max(eig_worst, fr.eig_B_error, fr.eig_Bstar_error,
                            fr.trace_B_error, fr.trace_Bstar_error)
            if not fr.feasible:
                return "fail", worst, f"predicted class ({mod.t},{mod.d}) infeasible", None
        if worst > 1e-6:
            return "fail", worst, "measured vs predicted exceeds 1e-6", None
        if eig_worst > 1e-8:
            return "fail", eig_worst, "spectral identities of predictions exceed 1e-8", None
        return "pass", worst, None, True

    @stage("trace_formula")
    def _trace():
        ups = multiplicity.build_upsilon(spectral.D)
        worst = 0.0
        for (t, d) in ups.cells:
            lhs = multiplicity.trace_lhs(ctx, t, d)
            rhs = multiplicity.krein_product_lhs(spectral, t, d)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        if worst > 1e-6:
            return "fail", worst, "trace identity exceeds 1e-6 relative", None
        return "pass", worst, None, True

    @stage("multiplicity_recurrence")
    def table():
        tab = multiplicity.solve_multiplicities(spectral)
        observed = module_census(modules)
        if not tab.matches_census(observed):
            return "fail", None, f"recurrence {tab.nonzero()} != census {observed}", None
        if tab.mult.get((0, spectral.D)) != 1:
            return "fail", None, "mult(0, D) != 1", None
        if tab.total_dimension() != spectral.n:
            return "fail", None, "dimension sum mismatch", None
        residual = max(tab.pre_rounding.values(), default=0.0)
        return "pass", residual, None, tab

    if not almost_bip:
        skip("qs_engine", "scheme is not almost-bipartite")
        return report

    @stage("qs_engine")
    def _qs():
        excl = qs.exclusion_check(spectral.pp, spectral.n)
        if excl.excluded:
            return "skip", None, f"excluded family: {excl.family}", None
        if spectral.D < 3:
            return "skip", None, f"q,s model needs D >= 3, scheme has D = {spectral.D}", None
        params = qs.fit_qs(spectral.theta, spectral.theta_star, spectral.D)
        ups = multiplicity.build_upsilon(spectral.D)
        worst = params.fit_residual
        for (t, d) in ups.cells:
            B1 = predictor.predict_B(t, d, spectral.theta, spectral.theta_star, spectral.D)
            B2 = qs.qs_predict_B(params, t, d)
            Bs1 = predictor.predict_Bstar(t, d, spectral.theta, spectral.theta_star, spectral.D)
            Bs2 = qs.qs_predict_Bstar(params, t, d)
            worst = max(worst, float(np.abs(B1 - B2).max()), float(np.abs(Bs1 - Bs2).max()))
        if worst > 1e-8:
            return "fail", worst, "q,s forms disagree with eigenvalue forms", None
        if table is not None:
            for (t, d) in ups.cells:
                if d >= spectral.D - 3:
                    closed = qs.qs_multiplicity(params, t, d)
                    if abs(closed - table.mult[t, d]) > 1e-6:
                        return "fail", worst, f"closed-form mult({t},{d}) = {closed} != recurrence", None
        return "pass", worst, None, True

    return report


def _census_str(cen: dict) -> str:
    return "{" + ", ".join(f"({t},{d}):{v}" for (t, d), v in sorted(cen.items())) + "}"


# ---------------------------------------------------------------- subcommands

def _cmd_gen(args) -> int:
    scheme = generators.generate(args.family, args.D)
    generators.save_scheme(scheme, args.out)
    print(f"wrote {args.family}(D={args.D}): n={scheme.n} -> {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    scheme = _load(args.scheme)
    tensor = scheme.tensor
    doc = {
        "n": scheme.n,
        "D": scheme.D,
        "valencies": tensor.k.tolist(),
        "valid": True,
    }

    def text(doc):
        print(f"valid scheme: n={doc['n']} D={doc['D']} valencies={doc['valencies']}")

    _emit(doc, args.json, text)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    scheme = _load(args.scheme)
    sp = spectral_data(scheme)
    if not sp.is_q_polynomial:
        print("no Q-polynomial ordering; context unavailable", file=sys.stderr)
        return EXIT_CHECK_FAILED
    ctx = build_context(scheme, sp, args.vertex)
    rep = verify_operator_identities(ctx, tol=args.tol)
    doc = {
        "vertex": args.vertex,
        "p_ordering": list(sp.p_ordering),
        "q_ordering": list(sp.q_ordering),
        "theta": sp.theta.tolist(),
        "theta_star": sp.theta_star.tolist(),
        "almost_bipartite": is_almost_bipartite(sp.pp),
        "identities": rep.as_dict(),
    }

    def text(doc):
        print(f"vertex {doc['vertex']}  theta={np.round(doc['theta'], 6).tolist()}")
        print(f"theta*={np.round(doc['theta_star'], 6).tolist()}")
        for chk in doc["identities"]["checks"]:
            status = "pass" if chk["passed"] else "FAIL"
            print(f"  {status}  {chk['name']:34s} residual={chk['residual']:.3e}")

    _emit(doc, args.json, text)
    return EXIT_OK if rep.all_passed else EXIT_CHECK_FAILED


def _cmd_predict(args) -> int:
    scheme = _load(args.scheme)
    sp = spectral_data(scheme)
    if not sp.is_q_polynomial:
        print("no Q-polynomial ordering", file=sys.stderr)
        return EXIT_CHECK_FAILED
    mc = predictor.module_class(args.t, args.d, sp)
    fr = predictor.feasibility(mc, sp.theta, sp.theta_star)
    doc = {
        "t": mc.t, "d": mc.d, "r": mc.r,
        "B": mc.B.tolist(),
        "Bstar": mc.Bstar.tolist(),
        "a0star": mc.a0star,
        "feasibility": fr.as_dict(),
    }

    def text(doc):
        print(f"class (t={doc['t']}, d={doc['d']}), endpoint r={doc['r']}")
        print("B(W) =")
        print(np.array(doc["B"]))
        print("B*(W) =")
        print(np.array(doc["Bstar"]))
        print(f"feasible: {doc['feasibility']['feasible']}")

    _emit(doc, args.json, text)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    scheme = _load(args.scheme)
    sp = spectral_data(scheme)
    if not sp.is_q_polynomial:
        print("no Q-polynomial ordering", file=sys.stderr)
        return EXIT_CHECK_FAILED
    ctx = build_context(scheme, sp, args.vertex)
    kwargs = {"seed": args.seed} if args.tol is None else {"seed": args.seed, "tol": args.tol}
    mods = measure_all(ctx, decompose_standard_module(ctx, **kwargs))
    doc = {
        "vertex": args.vertex,
        "seed": args.seed,
        "census": [
            {"t": t, "d": d, "count": v} for (t, d), v in sorted(module_census(mods).items())
        ],
        "modules": [
            {
                "r": m.r, "t": m.t, "d": m.d, "dim": m.dim,
                "thin": m.thin, "dual_thin": m.dual_thin,
                "B": m.measured_B.tolist(),
                "Bstar": m.measured_Bstar.tolist(),
            }
            for m in mods
        ],
    }

    def text(doc):
        print(f"{len(doc['modules'])} irreducible modules (vertex={doc['vertex']}, seed={doc['seed']})")
        for row in doc["census"]:
            print(f"  (t={row['t']}, d={row['d']}): {row['count']}")

    _emit(doc, args.json, text)
    return EXIT_OK


def _cmd_multiplicities(args) -> int:
    scheme = _load(args.scheme)
    sp = spectral_data(scheme)
    if not sp.is_q_polynomial:
        print("no Q-polynomial ordering", file=sys.stderr)
        return EXIT_CHECK_FAILED
    tab = multiplicity.solve_multiplicities(sp)
    doc = tab.as_dict()
    exit_code = EXIT_OK
    if args.oracle:
        ctx = build_context(scheme, sp, args.vertex)
        observed = module_census(decompose_standard_module(ctx, seed=args.seed))
        doc["oracle_census"] = [
            {"t": t, "d": d, "count": v} for (t, d), v in sorted(observed.items())
        ]
        cells = sorted(set(tab.mult) | set(observed))
        doc["oracle_diff"] = [
            {"t": t, "d": d, "recurrence": tab.mult.get((t, d), 0), "oracle": observed.get((t, d), 0)}
            for (t, d) in cells
            if tab.mult.get((t, d), 0) != observed.get((t, d), 0)
        ]
        doc["matches_oracle"] = not doc["oracle_diff"]
        if not doc["matches_oracle"]:
            exit_code = EXIT_CHECK_FAILED

    def text(doc):
        print("mult(t, d) from the trace recurrence:")
        for row in doc["mult"]:
            if row["count"]:
                print(f"  (t={row['t']}, d={row['d']}): {row['count']}")
        print(f"total dimension {doc['total_dimension']}")
        if "matches_oracle" in doc:
            print(f"matches oracle census: {doc['matches_oracle']}")
            for row in doc["oracle_diff"]:
                print(f"  differs at (t={row['t']}, d={row['d']}): "
                      f"recurrence {row['recurrence']} vs oracle {row['oracle']}")

    _emit(doc, args.json, text)
    return exit_code


def _cmd_qs(args) -> int:
    scheme = _load(args.scheme)
    sp = spectral_data(scheme)
    if not sp.is_q_polynomial:
        print("no Q-polynomial ordering", file=sys.stderr)
        return EXIT_CHECK_FAILED
    if not is_almost_bipartite(sp.pp):
        print("scheme is not almost-bipartite; q,s model does not apply", file=sys.stderr)
        return EXIT_CHECK_FAILED
    excl = qs.exclusion_check(sp.pp, sp.n)
    doc = {"exclusion": {"is_odd_graph": excl.is_odd_graph,
                         "is_folded_cube": excl.is_folded_cube}}
    skipped = None
    if excl.excluded:
        skipped = f"excluded family: {excl.family}"
    elif sp.D < 3:
        skipped = f"q,s model needs D >= 3, scheme has D = {sp.D}"
    if skipped is not None:
        doc["skipped"] = skipped

        def text(doc):
            print(f"q,s fit skipped: {doc['skipped']}")

        _emit(doc, args.json, text)
        return EXIT_OK
    params = qs.fit_qs(sp.theta, sp.theta_star, sp.D)
    doc["params"] = params.as_dict()
    table = []
    for (t, d) in multiplicity.build_upsilon(sp.D).cells:
        try:
            value = qs.qs_multiplicity(params, t, d)
        except OutOfRange:
            continue
        table.append({"t": t, "d": d, "mult": value})
    doc["closed_form_mult"] = sorted(table, key=lambda r: (r["t"], r["d"]))

    def text(doc):
        p = doc["params"]
        print(f"q = {complex(*p['q'])}  s = {complex(*p['s'])}")
        print(f"h = {complex(*p['h'])}  h* = {complex(*p['hstar'])}  residual {p['fit_residual']:.2e}")
        for row in doc["closed_form_mult"]:
            print(f"  mult({row['t']}, {row['d']}) = {row['mult']:.6f}")

    _emit(doc, args.json, text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_verify(args.scheme, vertex=args.vertex, seed=args.seed, tol=args.tol)
    if args.json:
        print(json.dumps({"schema": SCHEMA, **report.as_dict()}, sort_keys=True))
    else:
        print(report.render_text())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="terwlab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--tol", type=float, default=None, help="override default tolerances")
    common.add_argument("--seed", type=int, default=0, help="random seed for the decomposition")
    common.add_argument("--vertex", type=int, default=0, help="base vertex")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a scheme file")
    p.add_argument("--family", required=True, choices=sorted(generators.FAMILIES))
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_gen)

    for name, fn, extra in [
        ("validate", _cmd_validate, ()),
        ("analyze", _cmd_analyze, ()),
        ("predict", _cmd_predict, ("t", "d")),
        ("decompose", _cmd_decompose, ()),
        ("multiplicities", _cmd_multiplicities, ("oracle",)),
        ("qs", _cmd_qs, ()),
        ("verify", _cmd_verify, ()),
    ]:
        p = sub.add_parser(name, parents=[common], help=f"{name} a scheme file")
        p.add_argument("--scheme", required=True)
        if "t" in extra:
            p.add_argument("--t", type=int, required=True)
            p.add_argument("--d", type=int, required=True)
        if "oracle" in extra:
            p.add_argument("--oracle", action="store_true", help="also run the oracle and diff")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, AxiomViolation, InvalidParameter, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except TerwLabError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
