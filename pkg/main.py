#!/usr/bin/env python3
"""
Sextic SUSY Spectral Engine — Main Entry Point

Commands:
    catalog    shape-invariant superpotential table
    spectrum   energies by recursion, closed form, oracle, or all three
    sample     V₋, V₊, V or wavefunctions on a grid (CSV x,value)
    verify     hard-assertion suites; exit 1 on failure
    figure     data files behind the triple-well figure
    scan-rho   gap ratio across the triple-well band

Exit codes: 0 pass, 1 assertion failure or internal error, 2 invalid input.
"""

import os
import sys
import argparse
import logging

# Add project root to path
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, PROJECT_ROOT)

import numpy as np

from modules import ladder, oracle, published_forms, sextic, verification
from modules.errors import INPUT_ERRORS, ConstraintViolation, SpectralError
from modules.grid import symmetric_grid
from modules.logger import RunLogger, setup_logging
from modules.potentials import FamilyId, Params, Sign, catalog, eval_partner, get_family
from modules.settings import DEFAULT_CONFIG_PATH, apply_overrides, load_config
from modules.shape_invariance import (
    check_grid, closed_form_spectrum, energies_recursive, verify_shape_invariance,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

METHODS = ("recursion", "closed-form", "oracle", "all")


# =============================================================================
# Main Application
# =============================================================================

class SpectralEngine:
    """Orchestrates one CLI command: config, logging, computation, artifacts."""

    def __init__(self, config_path=DEFAULT_CONFIG_PATH, overrides=None):
        self.config = self._load_config(config_path, overrides or {})
        self.version = self.config.get("system", {}).get("version", "0.0.0")
        self._init_logging()

    def _load_config(self, config_path, overrides):
        """Load the built-in defaults and apply per-run flag overrides."""
        config = load_config(config_path)
        config = apply_overrides(
            config, "shape_invariance",
            grid_points=overrides.get("grid_points"),
            domain_halfwidth=overrides.get("domain_halfwidth"),
            tol=overrides.get("tol"),
        )
        return apply_overrides(config, "output", out_dir=overrides.get("out"), format=overrides.get("format"))

    def _init_logging(self):
        system_config = self.config.get("system", {})
        log_config = dict(self.config.get("logging", {}))
        for key in ("log_file", "ledger_log_file"):
            path = log_config.get(key)
            if path and not os.path.isabs(path):
                log_config[key] = os.path.join(PROJECT_ROOT, path)
        self.log_config = log_config
        setup_logging(log_config, system_config.get("log_level", "INFO"))
        logger.info("%s %s — starting", system_config.get("name", "Spectral Engine"), self.version)

    @property
    def out_dir(self):
        return self.config.get("output", {}).get("out_dir", "output")

    @property
    def fmt(self):
        return self.config.get("output", {}).get("format", "json")

    @property
    def pole_radius(self):
        return self.config.get("potentials", {}).get("pole_radius", 1e-6)

    @property
    def scale_p(self):
        return self.config.get("potentials", {}).get("scale_p", 1.0)

    def tolerances(self):
        si = self.config.get("shape_invariance", {})
        orc = self.config.get("oracle", {})
        return {
            "shape_invariance_tol": si.get("tol", 1e-8),
            "grid_points": si.get("grid_points", 2001),
            "domain_halfwidth": si.get("domain_halfwidth", 10.0),
            "oracle_target_tol": orc.get("target_tol", 1e-6),
            "oracle_residual_target": orc.get("residual_target", 1e-8),
        }

    def run(self, args):
        """Dispatch a parsed command; returns the process exit code."""
        parameters = {k: v for k, v in sorted(vars(args).items()) if k != "handler"}
        with RunLogger(self.out_dir, args.command, parameters, self.version,
                       self.tolerances(), self.log_config) as run:
            try:
                code, outcome = args.handler(self, args, run)
            except INPUT_ERRORS as exc:
                run.finish({"status": "invalid-input", "error": type(exc).__name__, "message": str(exc)})
                raise
            run.write_ledger_csv()
            run.finish(outcome)
        return code

    # -------------------------------------------------------------------------
    # catalog
    # -------------------------------------------------------------------------

    def cmd_catalog(self, args, run):
        specs = [get_family(args.family)] if args.family else catalog()
        rows = []
        for spec in specs:
            a0 = spec.reference_params
            rows.append({
                "family": spec.id.value,
                "name": spec.name,
                "arity": spec.arity,
                "param_names": list(spec.param_names),
                "W": spec.printed_W,
                "partner": spec.printed_partner,
                "energy": spec.printed_energy_text,
                "map": spec.printed_map_text,
                "reference_params": a0.as_dict(spec.param_names),
                "domain": spec.domain(a0).to_dict(),
                "invariant_levels": spec.invariant_levels,
            })
        if self.fmt == "csv":
            fields = ["family", "name", "arity", "W", "partner", "energy", "map", "invariant_levels"]
            run.write_csv("catalog.csv", fields, rows)
        else:
            run.write_json("catalog.json", {"families": rows})
        return EXIT_OK, {"status": "ok", "families": len(rows)}

    # -------------------------------------------------------------------------
    # spectrum
    # -------------------------------------------------------------------------

    def cmd_spectrum(self, args, run):
        spec = get_family(args.family)
        if args.n is None:
            args.n = 2 if spec.id is FamilyId.SEXTIC else 3
        if args.n < 0:
            raise ConstraintViolation(f"requires n >= 0 (got {args.n})", inequality="n >= 0")
        if spec.id is FamilyId.SEXTIC:
            document = self._sextic_spectrum(args)
        else:
            document = self._catalog_spectrum(spec, args)

        if self.fmt == "csv":
            rows = _spectrum_rows(document)
            run.write_csv("spectrum.csv", ["n"] + list(document["methods"]), rows)
        else:
            run.write_json("spectrum.json", document)
        return EXIT_OK, {"status": "ok", "methods": list(document["methods"])}

    def _catalog_spectrum(self, spec, args):
        params = _params_from_args(spec, args, self.scale_p)
        si_config = self.config.get("shape_invariance", {})
        tol = si_config.get("tol", 1e-8)
        grid = check_grid(spec, params, si_config)
        methods, residuals = {}, {}
        wanted = _methods(args.method)

        if "recursion" in wanted:
            spectrum = energies_recursive(spec, params, args.n, grid, tol, config=si_config)
            methods["recursion"] = spectrum.to_dict()["levels"]
            reports = verify_shape_invariance(spec, params, max(args.n, 1), grid, tol, config=si_config)
            residuals["recursion"] = [r.residual for r in reports[:args.n]]
        if "closed-form" in wanted:
            methods["closed-form"] = closed_form_spectrum(spec, params, args.n).to_dict()["levels"]
            if spec.corrected_energy is not None:
                methods["closed-form-corrected"] = closed_form_spectrum(
                    spec, params, args.n, corrected=True).to_dict()["levels"]
        diagnostics = {}
        if "oracle" in wanted:
            result = oracle.family_spectrum(spec, params, args.n + 1, self.config.get("oracle", {}),
                                            si_config.get("domain_halfwidth", 10.0))
            methods["oracle"] = [
                {"n": n, "E": float(e), "provenance": "oracle"} for n, e in enumerate(result.extrapolated)
            ]
            residuals["oracle"] = result.residuals
            diagnostics["oracle"] = result.diagnostics
        return {
            "family": spec.id.value,
            "params": params.as_dict(spec.param_names),
            "method": args.method,
            "methods": methods,
            "residuals": residuals,
            "deltas": _deltas(methods),
            "diagnostics": diagnostics,
        }

    def _sextic_spectrum(self, args):
        cfg = _sextic_config(args)
        sextic_config = self.config.get("sextic", {})
        points = sextic_config.get("oracle_points", 4001)
        if args.n > 2:
            raise ConstraintViolation(f"requires n <= 2 for the sextic (got {args.n})", inequality="n <= 2")
        wanted = _methods(args.method)
        authoritative = sextic.bound_energies(cfg, args.n, points)
        methods, residuals = {}, {}

        if "recursion" in wanted:
            # the recursion only fixes C0; the levels it yields in the V frame are the analytic ones
            methods["analytic"] = [
                level.to_dict() for level in authoritative.levels if level.provenance.value == "analytic"
            ]
            a0 = sextic.level_zero_params(cfg)
            report = verify_shape_invariance(FamilyId.SEXTIC, a0, 1, tol=self.config.get(
                "shape_invariance", {}).get("tol", 1e-8), variant=authoritative.metadata["map"],
                config=self.config.get("shape_invariance", {}))[0]
            residuals["recursion"] = [report.residual]
        if "closed-form" in wanted:
            eps = authoritative.metadata["epsilon"]
            methods["closed-form"] = [
                {"n": n, "E": published_forms.bound_energy_printed(cfg.B0, cfg.G0, n, eps), "provenance": "closed-form"}
                for n in range(args.n + 1)
            ]
        if "oracle" in wanted:
            levels = sextic.oracle_levels(cfg, points)
            methods["oracle"] = [level.to_dict() for level in levels.levels[:args.n + 1]]
            residuals["oracle"] = levels.metadata["residuals"]
        if args.method == "all":
            methods["authoritative"] = authoritative.to_dict()["levels"]
        return {
            "family": FamilyId.SEXTIC.value,
            "params": {**cfg.to_dict(), **sextic.level_zero_params(cfg).as_dict()},
            "method": args.method,
            "methods": methods,
            "residuals": residuals,
            "deltas": _deltas(methods),
            "metadata": {k: v for k, v in authoritative.metadata.items() if k != "oracle_grid"},
        }

    # -------------------------------------------------------------------------
    # sample
    # -------------------------------------------------------------------------

    def cmd_sample(self, args, run):
        spec = get_family(args.family)
        si_config = self.config.get("shape_invariance", {})
        points = args.points or si_config.get("grid_points", 2001)
        if spec.id is FamilyId.SEXTIC:
            cfg = _sextic_config(args)
            a0 = sextic.derive_dependent_params(cfg)
            halfwidth = args.halfwidth or sextic.oracle_halfwidth(cfg)
            grid = symmetric_grid(halfwidth, points)
            values = _sample_sextic(cfg, a0, grid, args.quantity, args.n, self.pole_radius,
                                    self.config.get("sextic", {}).get("oracle_points", 4001))
        else:
            params = _params_from_args(spec, args, self.scale_p)
            grid_config = dict(si_config, grid_points=points)
            if args.halfwidth is not None:
                grid_config["domain_halfwidth"] = args.halfwidth
            grid = check_grid(spec, params, grid_config)
            values = _sample_catalog(spec, params, grid, args.quantity, args.n, self.pole_radius,
                                     self.config.get("ladder", {}).get("exponent_cap", 700.0))
        name = f"{args.quantity}.csv" if args.quantity != "psi" else f"psi_{args.n}.csv"
        run.write_columns(name, {"x": grid.x, "value": values})
        return EXIT_OK, {"status": "ok", "points": grid.n}

    # -------------------------------------------------------------------------
    # verify
    # -------------------------------------------------------------------------

    def cmd_verify(self, args, run):
        cfg = _sextic_config(args)
        if args.scope in ("sextic", "all"):
            sextic.derive_dependent_params(cfg)
            sextic.require_band(cfg)
        suites = verification.run_suites(args.scope, cfg, self.config,
                                         self.config.get("shape_invariance", {}).get("tol"))
        passed = all(s.passed for s in suites)
        report = {"scope": args.scope, "passed": passed, "suites": [s.to_dict() for s in suites]}
        if self.fmt == "csv":
            rows = [{"suite": s.name, **c.to_dict()} for s in suites for c in s.checks]
            run.write_csv("verify.csv", ["suite", "name", "passed", "hard", "value", "threshold"], rows)
        else:
            run.write_json("verify.json", report)
        failures = {s.name: s.failures for s in suites if not s.passed}
        if failures:
            logger.error("Verification failed: %s", failures)
        return (EXIT_OK if passed else EXIT_FAILED), {"status": "pass" if passed else "fail", "failures": failures}

    # -------------------------------------------------------------------------
    # figure
    # -------------------------------------------------------------------------

    def cmd_figure(self, args, run):
        cfg = _sextic_config(args)
        summary = export_figure_data(cfg, run, self.config.get("sextic", {}), args.points)
        return EXIT_OK, {"status": "ok", **summary}

    # -------------------------------------------------------------------------
    # scan-rho
    # -------------------------------------------------------------------------

    def cmd_scan_rho(self, args, run):
        sextic_config = self.config.get("sextic", {})
        scan = sextic.scan_rho(
            args.ratio_min, args.ratio_max, args.samples or sextic_config.get("scan_samples", 200),
            args.B0 if args.B0 is not None else 1.0, sextic_config, args.workers,
        )
        run.write_columns("rho.csv", {"ratio": scan.ratios, "rho": scan.rhos})
        summary = scan.to_dict()
        summary["rho_harmonic"] = sextic.RHO_HARMONIC
        summary["published_bound"] = published_forms.RHO_PUBLISHED_BOUND
        run.write_json("scan.json", summary)
        return EXIT_OK, {"status": "ok", "rho_min": scan.rho_min, "argmin_ratio": scan.argmin_ratio}


# =============================================================================
# Helpers
# =============================================================================

def _methods(method):
    return ("recursion", "closed-form", "oracle") if method == "all" else (method,)


def _params_from_args(spec, args, scale_p=1.0):
    ref = spec.reference_params
    return Params(
        A=args.A if args.A is not None else ref.A,
        B=args.B if args.B is not None else ref.B,
        D=args.D if args.D is not None else ref.D,
        G=args.G if args.G is not None else ref.G,
        p=args.p if args.p is not None else scale_p,
    )


def _sextic_config(args):
    default = sextic.figure_config()
    B0 = args.B0 if getattr(args, "B0", None) is not None else default.B0
    G0 = args.G0 if getattr(args, "G0", None) is not None else (default.G0 if B0 == default.B0 else None)
    if G0 is None:
        raise ConstraintViolation("requires --G0 when --B0 differs from the figure default", inequality="G0 given")
    return sextic.SexticConfig(B0, G0)


def _deltas(methods):
    """E(method) − E(reference) per shared level, reference = first method listed."""
    names = list(methods)
    if len(names) < 2:
        return {}
    reference = {level["n"]: level["E"] for level in methods[names[0]]}
    deltas = {}
    for name in names[1:]:
        deltas[f"{name} - {names[0]}"] = [
            {"n": level["n"], "delta": level["E"] - reference[level["n"]]}
            for level in methods[name] if level["n"] in reference
        ]
    return deltas


def _spectrum_rows(document):
    by_n = {}
    for name, levels in document["methods"].items():
        for level in levels:
            by_n.setdefault(level["n"], {"n": level["n"]})[name] = level["E"]
    return [by_n[n] for n in sorted(by_n)]


def _sample_catalog(spec, params, grid, quantity, n, pole_radius=1e-6, exponent_cap=700.0):
    if quantity == "V-minus":
        return eval_partner(spec, params, grid.x, Sign.MINUS, pole_radius)
    if quantity == "V-plus":
        return eval_partner(spec, params, grid.x, Sign.PLUS, pole_radius)
    if quantity == "psi":
        return ladder.excited_state(spec, params, n, grid, exponent_cap=exponent_cap,
                                    pole_radius=pole_radius).values
    raise ConstraintViolation(f"quantity {quantity!r} needs the sextic family", inequality="family == sextic")


def _sample_sextic(cfg, a0, grid, quantity, n, pole_radius=1e-6, oracle_points=4001):
    """Sextic quantities; every psi is an eigenstate of the shifted triple well V."""
    x = grid.x
    if quantity == "V-minus":
        return eval_partner(FamilyId.SEXTIC, a0, x, Sign.MINUS, pole_radius)
    if quantity == "V-plus":
        return eval_partner(FamilyId.SEXTIC, a0, x, Sign.PLUS, pole_radius)
    if quantity == "V":
        return sextic.potential_V(cfg, x)
    if quantity == "psi":
        if n not in (0, 1, 2):
            raise ConstraintViolation(f"requires n <= 2 for the sextic (got {n})", inequality="n <= 2")
        if n == 1:
            return sextic.odd_state(cfg, grid, oracle_points).values
        key = {0: "ground", 2: "chi"}[n]
        return sextic.sample_states(cfg, grid)[key].values
    raise ConstraintViolation(f"unknown quantity {quantity!r}", inequality="known quantity")


def export_figure_data(cfg, run, sextic_config=None, points=None):
    """
    Write potential.csv, psi_0.csv, psi_0_unnormalized.csv, psi_1.csv,
    psi_2.csv, chi.csv and energies.csv for one triple-well configuration.
    """
    sextic_config = sextic_config or {}
    points = points or sextic_config.get("figure_points", 2001)
    x0_sq = sextic.outer_minimum_x0sq(cfg)
    grid = symmetric_grid(sextic.oracle_halfwidth(cfg), points)
    x = grid.x
    states = sextic.sample_states(cfg, grid)
    run.write_columns("potential.csv", {"x": x, "V": sextic.potential_V(cfg, x)})
    run.write_columns("psi_0.csv", {"x": x, "value": states["ground"].values})
    run.write_columns("psi_1.csv", {"x": x, "value": states["psi_1"].values})
    run.write_columns("psi_2.csv", {"x": x, "value": states["psi_2"].values})
    run.write_columns("chi.csv", {"x": x, "value": states["chi"].values})

    # printed Ψ₀ grows like e^{−S}; kept to the inner window where it stays finite
    inner = symmetric_grid(1.5 * np.sqrt(x0_sq), points)
    run.write_columns("psi_0_unnormalized.csv", {
        "x": inner.x, "value": sextic.wavefunction_analytic(cfg, 0, inner.x),
    })

    spectrum = sextic.bound_energies(cfg, 2, sextic_config.get("oracle_points", 4001))
    eps = spectrum.metadata["epsilon"]
    run.write_csv("energies.csv", ["n", "E", "provenance", "printed"], [
        {"n": level.n, "E": level.E, "provenance": level.provenance.value,
         "printed": published_forms.bound_energy_printed(cfg.B0, cfg.G0, level.n, eps)}
        for level in spectrum.levels
    ])
    return {"x0_sq": x0_sq, "epsilon": eps, "C0": spectrum.metadata["C0"], "points": grid.n}


# =============================================================================
# Argument Parsing
# =============================================================================

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-points", type=int, default=None, help="shape-invariance grid size")
    common.add_argument("--domain-halfwidth", type=float, default=None, help="full-line grid half-width")
    common.add_argument("--tol", type=float, default=None, help="shape-invariance tolerance")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", default=None, help="output directory (default ./output)")
    common.add_argument("--log-level", default=None, choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--family", default="sextic", help="family id (see `catalog`)")
    for name in ("A", "B", "D", "G", "p"):
        params.add_argument(f"--{name}", type=float, default=None)

    sextic_params = argparse.ArgumentParser(add_help=False)
    sextic_params.add_argument("--B0", type=float, default=None, help="default: figure value 100")
    sextic_params.add_argument("--G0", type=float, default=None, help="default: figure value")

    parser = argparse.ArgumentParser(prog="sextic-engine", description="Sextic SUSY spectral engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list shape-invariant families")
    p.add_argument("--family", default=None)
    p.set_defaults(handler=SpectralEngine.cmd_catalog)

    p = sub.add_parser("spectrum", parents=[common, params, sextic_params], help="energy levels")
    p.add_argument("--n", type=int, default=None, help="highest level (3; 2 for the sextic)")
    p.add_argument("--method", choices=METHODS, default="recursion")
    p.set_defaults(handler=SpectralEngine.cmd_spectrum)

    p = sub.add_parser("sample", parents=[common, params, sextic_params], help="grid samples as CSV")
    p.add_argument("--quantity", choices=("V-minus", "V-plus", "V", "psi"), default="V")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--halfwidth", type=float, default=None)
    p.set_defaults(handler=SpectralEngine.cmd_sample)

    p = sub.add_parser("verify", parents=[common, sextic_params], help="run verification suites")
    p.add_argument("--scope", choices=("catalog", "sextic", "all"), default="all")
    p.set_defaults(handler=SpectralEngine.cmd_verify)

    p = sub.add_parser("figure", parents=[common, sextic_params], help="figure data files")
    p.add_argument("--points", type=int, default=None)
    p.set_defaults(handler=SpectralEngine.cmd_figure)

    p = sub.add_parser("scan-rho", parents=[common], help="gap ratio across the band")
    p.add_argument("--ratio-min", type=float, default=2.0)
    p.add_argument("--ratio-max", type=float, default=sextic.TRIPLE_WELL_UPPER_RATIO)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--B0", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=SpectralEngine.cmd_scan_rho)
    return parser


# =============================================================================
# Entry Point
# =============================================================================

def main(argv=None):
    """Entry point; returns the exit code."""
    args = build_parser().parse_args(argv)
    overrides = {
        "grid_points": args.grid_points,
        "domain_halfwidth": args.domain_halfwidth,
        "tol": args.tol,
        "format": args.format,
        "out": args.out,
    }
    engine = SpectralEngine(overrides=overrides)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)

    try:
        return engine.run(args)
    except INPUT_ERRORS as e:
        logger.error("Invalid input: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SpectralError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except Exception as e:
        logger.critical("Fatal error: %s", e, exc_info=True)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
