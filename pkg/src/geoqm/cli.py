"""Command-line interface: every analysis as a reproducible batch run.

Subcommands: check (invariant suite, JSON), structure (structure-constant
tables, CSV), tensors (two-qubit chart fields, CSV), witness (entanglement
witness sweeps and the independence locus, CSV), wigner (phase-space grids,
CSV), moyal (star-product identities and the semiclassical sweep). Exit
codes: 0 success, 1 validation failure, 2 failed acceptance-style checks,
64 usage errors. Numerical modules are imported inside handlers so --help
and flag validation stay fast.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Sequence

from geoqm import __version__
from geoqm import config as cfgmod

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CHECK_FAILED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """Parser whose usage errors exit with the BSD usage status."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _load_config(args: argparse.Namespace) -> cfgmod.RunConfig:
    cfg = (cfgmod.RunConfig.from_file(args.config) if args.config
           else cfgmod.RunConfig())
    return cfg.with_overrides(hbar=getattr(args, "hbar", None),
                              seed=getattr(args, "seed", None),
                              out=getattr(args, "out", None))


def _chart_points(seed: int, count: int):
    import numpy as np

    rng = np.random.default_rng(seed)
    return np.column_stack([
        1.0 + 0.3 * rng.uniform(-1, 1, count),
        rng.uniform(-0.5, 0.5, (count, 15)),
    ])


# ---------------------------------------------------------------------------
# handlers


def _cmd_check(args: argparse.Namespace, cfg: cfgmod.RunConfig) -> int:
    from geoqm import checks

    results = checks.run_invariant_suite(seed=cfg.seed,
                                         include_slow=args.all,
                                         tolerances=cfg.tolerances)
    passed = all(row["passed"] for row in results.values())
    text = cfgmod.json_summary("check", {"results": results, "passed": passed}, cfg)
    _emit(text + "\n", cfg.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _cmd_structure(args: argparse.Namespace, cfg: cfgmod.RunConfig) -> int:
    from geoqm import liedual

    n = {"u2": 2, "u3": 3, "u4": 4}[args.algebra]
    sc = liedual.structure_constants(liedual.gell_mann_basis(n))
    table = sc.c if args.table == "c" else sc.d
    dim = table.shape[0]

    def rows():
        for mu in range(dim):
            for nu in range(dim):
                for rho in range(dim):
                    v = float(table[mu, nu, rho])
                    yield mu, nu, rho, (0.0 if abs(v) < 1e-12 else v)

    import io

    buf = io.StringIO()
    cfgmod.write_csv(buf, ("mu", "nu", "rho", "value"), rows())
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def _cmd_tensors(args: argparse.Namespace, cfg: cfgmod.RunConfig) -> int:
    import io

    from geoqm import u4chart

    if args.verify_fields:
        points = _chart_points(cfg.seed, args.points)
        records = u4chart.discrepancy_report(points)
        buf = io.StringIO()
        cfgmod.write_csv(
            buf,
            ("field", "component", "point_id", "derived", "printed", "delta"),
            ((r["field"], r["component"], r["point_id"],
              r["derived"], r["printed"], r["delta"]) for r in records),
        )
        _emit(buf.getvalue(), cfg.out)
        tol = cfg.tolerance("u4_chain_rule", 1e-9)
        resid = u4chart.chain_rule_consistency(points)
        if resid > tol:
            print(f"geoqm: chain-rule consistency residual {resid:.3e} "
                  f"exceeds {tol:.1e}", file=sys.stderr)
            return EXIT_CHECK_FAILED
        return EXIT_OK

    point = _chart_points(cfg.seed, 1)[0]
    poisson, riemann = u4chart.chart_tensors(point)

    def rows():
        names = u4chart.COORD_NAMES
        for label, tensor in (("poisson", poisson), ("riemann", riemann)):
            for i, row_name in enumerate(names):
                for j, col_name in enumerate(names):
                    yield label, row_name, col_name, float(tensor[i, j])

    buf = io.StringIO()
    cfgmod.write_csv(buf, ("tensor", "row", "col", "value"), rows())
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def _cmd_witness(args: argparse.Namespace, cfg: cfgmod.RunConfig) -> int:
    import io

    import numpy as np

    from geoqm import witness

    buf = io.StringIO()
    if args.mode == "sweep":
        records = witness.sweep_records(args.a_min, args.a_max, args.steps)
        header = ("a", "b", "c", "phi", "S", "C", "wedge_norm", "bracket_SC")
        cfgmod.write_csv(buf, header,
                         ((r[k] for k in header) for r in records))
    else:  # locus
        if not (1.0 / 3.0 < args.a_min <= args.a_max < 0.5):
            raise ValueError("locus needs 1/3 < a_min <= a_max < 1/2")
        grid = np.linspace(args.a_min, args.a_max, args.steps)
        triples = witness.independence_locus(grid)
        if len(triples) != args.steps:
            raise ValueError("locus root-finding failed on part of the grid")
        cfgmod.write_csv(buf, ("a", "c"),
                         ((a, c) for a, _, c in triples))
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def _parse_state(spec: str):
    """Map a --state spec to a wavefunction builder taking the grid."""
    from geoqm.phasespace import oscillator_eigenstate

    if spec == "gaussian":
        return lambda grid: oscillator_eigenstate(grid, 0), None
    if spec.startswith("fock:"):
        try:
            level = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad fock level in --state {spec!r}") from None
        if level < 0:
            raise ValueError("fock level must be nonnegative")
        return lambda grid: oscillator_eigenstate(grid, level), None
    return None, spec  # a file path


def _load_state_file(path: str):
    import os

    import numpy as np

    if not os.path.exists(path):
        raise ValueError(f"state file not found: {path}")
    if path.endswith(".npy"):
        psi = np.load(path)
    else:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
        if data.shape[1] != 2:
            raise ValueError("state CSV must have two columns: re,im")
        psi = data[:, 0] + 1j * data[:, 1]
    psi = np.asarray(psi).reshape(-1).astype(complex)
    nrm = np.sqrt(np.sum(np.abs(psi) ** 2))
    if nrm == 0:
        raise ValueError("state file holds the zero vector")
    return psi


def _cmd_wigner(args: argparse.Namespace, cfg: cfgmod.RunConfig) -> int:
    import io

    import numpy as np

    from geoqm.phasespace import oscillator_grid, wigner_function

    builder, path = _parse_state(args.state)
    if path is None:
        grid = oscillator_grid(cfg.hbar, n=args.n)
        psi = builder(grid)
    else:
        psi = _load_state_file(path)
        grid = oscillator_grid(cfg.hbar, n=psi.size)
        psi = psi / np.sqrt(np.sum(np.abs(psi) ** 2) * grid.dq)
    w = wigner_function(psi, grid)

    def rows():
        for i in range(grid.n_q):
            qi = float(grid.q[i])
            for j in range(grid.n_p):
                yield qi, float(grid.p[j]), float(w[i, j])

    buf = io.StringIO()
    cfgmod.write_csv(buf, ("q", "p", "W"), rows())
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def _cmd_moyal(args: argparse.Namespace, cfg: cfgmod.RunConfig) -> int:
    import io

    if args.hbar_sweep:
        from geoqm.phasespace import hbar_convergence_sweep

        hbars = tuple(float(h) for h in args.hbars.split(","))
        if len(hbars) < 2 or any(h <= 0 for h in hbars):
            raise ValueError("--hbars needs at least two positive values")
        sweep = hbar_convergence_sweep(hbars, n=args.n)
        buf = io.StringIO()
        cfgmod.write_csv(buf, ("hbar", "defect"), sweep["rows"])
        _emit(buf.getvalue(), cfg.out)
        if cfg.out is not None:
            payload = {"slope": float(sweep["slope"]), "rows_csv": cfg.out}
            print(cfgmod.json_summary("moyal", payload, cfg))
        return EXIT_OK

    from geoqm.phasespace import PhasePolynomial, PhaseSpaceGrid, moyal_star

    grid = PhaseSpaceGrid(n_q=16, n_p=16, q_min=-4, q_max=4,
                          p_min=-4, p_max=4, hbar=cfg.hbar)
    q = PhasePolynomial.q()
    p = PhasePolynomial.p()
    orderings: dict[str, Any] = {}
    for name in ("weyl", "standard", "antistandard"):
        prod = moyal_star(q, p, grid, ordering=name)
        comm = prod - moyal_star(p, q, grid, ordering=name)
        orderings[name] = {
            "q_star_p": {f"q^{i} p^{j}": [z.real, z.imag]
                         for (i, j), z in sorted(prod.coeffs.items())},
            "commutator": {f"q^{i} p^{j}": [z.real, z.imag]
                           for (i, j), z in sorted(comm.coeffs.items())},
        }
    text = cfgmod.json_summary("moyal", {"orderings": orderings}, cfg)
    _emit(text + "\n", cfg.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geoqm",
                     description="Geometric quantum mechanics batch runs.")
    parser.add_argument("--config", metavar="PATH",
                        help="TOML config file; flags override its values")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND",
                                required=True)

    p_check = sub.add_parser("check", help="run the invariant suite")
    p_check.add_argument("--all", action="store_true",
                         help="include the slow checks")
    p_check.add_argument("--seed", type=int, default=None)
    p_check.add_argument("--out", metavar="FILE", default=None,
                         help="write the JSON summary here instead of stdout")
    p_check.set_defaults(func=_cmd_check)

    p_structure = sub.add_parser("structure",
                                 help="dump structure-constant tables as CSV")
    p_structure.add_argument("--algebra", choices=("u2", "u3", "u4"),
                             required=True)
    p_structure.add_argument("--table", choices=("c", "d"), default="c",
                             help="antisymmetric (c) or symmetric (d) table")
    p_structure.add_argument("--out", metavar="FILE", default=None)
    p_structure.set_defaults(func=_cmd_structure)

    p_tensors = sub.add_parser("tensors",
                               help="two-qubit chart tensors and field checks")
    p_tensors.add_argument("--chart", choices=("u4",), required=True)
    p_tensors.add_argument("--verify-fields", action="store_true",
                           help="emit the derived-vs-printed discrepancy report")
    p_tensors.add_argument("--points", type=int, default=20)
    p_tensors.add_argument("--seed", type=int, default=None)
    p_tensors.add_argument("--out", metavar="FILE", default=None)
    p_tensors.set_defaults(func=_cmd_tensors)

    p_witness = sub.add_parser("witness",
                               help="entanglement witness scans")
    wit_sub = p_witness.add_subparsers(dest="mode", metavar="MODE",
                                       required=True)
    p_sweep = wit_sub.add_parser("sweep", help="witness scan along b=a, c=a")
    p_sweep.add_argument("--a-min", type=float, default=0.05)
    p_sweep.add_argument("--a-max", type=float, default=0.45)
    p_sweep.add_argument("--steps", type=int, default=9)
    p_sweep.add_argument("--out", metavar="FILE", default=None)
    p_sweep.set_defaults(func=_cmd_witness)
    p_locus = wit_sub.add_parser("locus",
                                 help="recovered independence locus curve")
    p_locus.add_argument("--steps", type=int, default=100)
    p_locus.add_argument("--a-min", type=float, default=1.0 / 3.0 + 1e-3)
    p_locus.add_argument("--a-max", type=float, default=0.5 - 1e-3)
    p_locus.add_argument("--out", metavar="FILE", default=None)
    p_locus.set_defaults(func=_cmd_witness)

    p_wigner = sub.add_parser("wigner", help="Wigner function on a grid")
    p_wigner.add_argument("--state", required=True, metavar="SPEC",
                          help="gaussian, fock:n, or a file (CSV re,im / .npy)")
    p_wigner.add_argument("--hbar", type=float, default=None)
    p_wigner.add_argument("--n", type=int, default=512,
                          help="grid points per axis (power of two)")
    p_wigner.add_argument("--out", metavar="FILE", default=None)
    p_wigner.set_defaults(func=_cmd_wigner)

    p_moyal = sub.add_parser("moyal", help="star-product identities and sweeps")
    p_moyal.add_argument("--hbar-sweep", action="store_true",
                         help="emit the semiclassical convergence CSV")
    p_moyal.add_argument("--hbars", default="0.2,0.1,0.05",
                         help="comma-separated hbar values for the sweep")
    p_moyal.add_argument("--n", type=int, default=256)
    p_moyal.add_argument("--hbar", type=float, default=None)
    p_moyal.add_argument("--out", metavar="FILE", default=None)
    p_moyal.set_defaults(func=_cmd_moyal)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv and execute one subcommand, returning the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 0 if code is None else int(code)
    try:
        cfg = _load_config(args)
        return args.func(args, cfg)
    except BrokenPipeError:
        # the reader went away (e.g. piping into head); quietly stand down
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_VALIDATION
    except (ValueError, OSError) as exc:
        print(f"geoqm: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
