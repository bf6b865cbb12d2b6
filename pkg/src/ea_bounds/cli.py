"""Command-line front end.

Subcommands: ``bound classical``, ``bound quantum``, ``upper``, ``verify``,
``analyze frustration``.  Every output embeds the tool version and an echo of
the computation-defining configuration; identical configuration gives
byte-identical output (no timestamps, order-fixed reductions).  The thread
count and output path are execution details and are not echoed.

Exit codes: 0 success, 1 failed checks or numerical errors, 2 configuration
errors, 3 size/enumeration guard violations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import quantum
from .bounds import (
    EXACT,
    BoundReport,
    bernoulli,
    decimal_string,
    fraction_json,
    lower_bound,
    parse_distribution_table,
    report_json,
    sampled,
)
from .classical import (
    CouplingAssignment,
    antialign_table,
    frustration_census,
    gauge_transform,
)
from . import _kernels as kernels
from .errors import EigensolverError, GuardError
from .exact_gs import (
    draw_instance,
    exact_ground_state,
    sample_upper_bound,
    verify_cell_inequality_sample,
)
from .lattice import incident_bonds, make_cell, make_lattice


@dataclass(frozen=True)
class RunConfig:
    """Computation-defining knobs, echoed verbatim into every output."""

    command: str
    dimension: int | None = None
    dist: str | None = None
    alpha_grid: tuple[float, ...] | None = None
    side: int | None = None
    boundary: str | None = None
    samples: int | None = None
    draws: int | None = None
    seed: int | None = None
    precision: int = 6
    allow_noncentered: bool = False
    output_format: str = "human"

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def echo(self) -> str:
        parts = [self.command]
        if self.dimension is not None:
            parts.append(f"--dim {self.dimension}")
        if self.dist is not None:
            parts.append(f"--dist {self.dist}")
        if self.alpha_grid is not None:
            parts.append("--alpha-x " + ",".join(f"{a:g}" for a in self.alpha_grid))
        if self.side is not None:
            parts.append(f"--L {self.side}")
        if self.boundary is not None:
            parts.append(f"--boundary {self.boundary}")
        if self.samples is not None:
            parts.append(f"--samples {self.samples}")
        if self.draws is not None:
            parts.append(f"--draws {self.draws}")
        if self.seed is not None:
            parts.append(f"--seed {self.seed}")
        parts.append(f"--precision {self.precision}")
        if self.allow_noncentered:
            parts.append("--allow-noncentered")
        parts.append(f"--format {self.output_format}")
        return " ".join(parts)


def resolve_distribution(spec: str, seed: int, allow_noncentered: bool):
    """Parse a --dist value.

    Forms: ``bernoulli``, ``bernoulli:J`` (exact fraction), ``file:PATH``
    (value/probability table), ``normal``/``normal:SCALE``,
    ``bernoulli-sampler:SCALE``, ``point:VALUE`` (the last three are Monte
    Carlo samplers).
    """
    name, _, arg = spec.partition(":")
    if name == "bernoulli":
        return bernoulli(Fraction(arg) if arg else 1)
    if name == "file":
        if not arg:
            raise ValueError("file: needs a path, e.g. file:table.txt")
        return parse_distribution_table(
            Path(arg).read_text(), allow_noncentered=allow_noncentered
        )
    if name == "normal":
        return sampled("normal", seed, scale=float(arg) if arg else 1.0)
    if name == "bernoulli-sampler":
        return sampled("bernoulli", seed, scale=float(arg) if arg else 1.0)
    if name == "point":
        if not arg:
            raise ValueError("point: needs a value, e.g. point:1")
        return sampled(
            "point", seed, value=float(arg), allow_noncentered=allow_noncentered
        )
    raise ValueError(f"unrecognized distribution spec {spec!r}")


def _header(cfg: RunConfig) -> str:
    return f"# ea-bounds {__version__} | {cfg.echo()}"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _render_report_human(report: BoundReport, cfg: RunConfig) -> str:
    p = cfg.precision
    lines = [_header(cfg)]
    lines.append(f"per-site ground-state energy lower bound, d={report.dimension}")
    lines.append(f"  distribution : {report.distribution}")
    lines.append(f"  method       : {report.method}")
    if report.method == EXACT:
        lines.append(
            f"  cell average : {report.cell_average} "
            f"({decimal_string(report.cell_average, p)})"
        )
        lines.append(f"  multiplicity : {report.multiplicity}")
        lines.append(f"  lower bound  : {report.lower_bound} ({report.decimal})")
        if report.enumeration is not None:
            configs, esum = report.enumeration
            lines.append(
                f"  enumeration  : {report.multiplicity * esum}/{configs} "
                f"over {configs} coupling patterns (cell energy sum {esum})"
            )
        lines.append(
            f"  misfit bound : {report.misfit_bound} "
            f"({decimal_string(report.misfit_bound, p)}) "
            f"against ideal {report.ideal_energy} per site"
        )
    else:
        lines.append(f"  cell average : {report.cell_average!r}")
        lines.append(
            f"  lower bound  : {report.decimal} +- {report.mc_stderr:.3g} "
            f"(stderr, {report.samples} samples)"
        )
        lines.append(f"  misfit bound : {report.misfit_bound:.6g}")
    lines.append("  literature comparison:")
    for c in report.comparison_constants:
        lines.append(f"    {c.role:<16} {c.value:<9g} {c.label} [{c.source}]")
    up = next(c for c in report.comparison_constants if c.role == "upper")
    lines.append(f"  sandwich     : {report.decimal} <= e({report.dimension}) <= {up.value:g}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def cmd_bound_classical(args) -> int:
    cfg = RunConfig(
        command="bound classical",
        dimension=args.dim,
        dist=args.dist,
        samples=args.samples,
        seed=args.seed,
        precision=args.precision,
        allow_noncentered=args.allow_noncentered,
        output_format=args.format,
    )
    dist = resolve_distribution(args.dist, args.seed, args.allow_noncentered)
    report = lower_bound(
        make_cell(args.dim),
        dist,
        samples=args.samples,
        precision=args.precision,
        threads=args.threads,
    )
    if args.format == "json":
        payload = report_json(report, args.precision)
        payload["config"] = cfg.as_dict()
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(_render_report_human(report, cfg), args.output)
    return 0


def cmd_bound_quantum(args) -> int:
    grid = tuple(float(a) for a in args.alpha_x.split(","))
    cfg = RunConfig(
        command="bound quantum",
        dimension=args.dim,
        dist=args.dist,
        alpha_grid=grid,
        samples=args.samples,
        seed=args.seed,
        precision=args.precision,
        allow_noncentered=args.allow_noncentered,
        output_format=args.format,
    )
    dist = resolve_distribution(args.dist, args.seed, args.allow_noncentered)
    points = quantum.anisotropy_sweep(
        make_cell(args.dim), dist, grid, samples=args.samples, threads=args.threads
    )
    if args.format == "csv":
        lines = [f"# ea-bounds/1 version={__version__}", f"# {cfg.echo()}"]
        lines.append("alpha_x,lower_bound,method,stderr")
        for pt in points:
            err = "" if pt.stderr is None else repr(pt.stderr)
            lines.append(f"{pt.alpha_x:g},{pt.lower_bound!r},{pt.method},{err}")
        _emit("\n".join(lines) + "\n", args.output)
    elif args.format == "json":
        payload = {
            "schema": "ea-bounds/1",
            "version": __version__,
            "kind": "anisotropy-sweep",
            "config": cfg.as_dict(),
            "points": [
                {
                    "alpha_x": pt.alpha_x,
                    "lower_bound": pt.lower_bound,
                    "method": pt.method,
                    "stderr": pt.stderr,
                }
                for pt in points
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        lines = [_header(cfg)]
        lines.append(
            f"per-site lower bound vs alpha_x (alpha_y=0, alpha_z=1), d={args.dim}"
        )
        lines.append("  alpha_x   lower_bound           method           stderr")
        for pt in points:
            err = "" if pt.stderr is None else f"{pt.stderr:.3g}"
            lines.append(
                f"  {pt.alpha_x:<8g}{pt.lower_bound!r:<22}{pt.method:<17}{err}".rstrip()
            )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_upper(args) -> int:
    cfg = RunConfig(
        command="upper",
        dimension=args.dim,
        dist=args.dist,
        side=args.L,
        boundary=args.boundary,
        samples=args.samples,
        seed=args.seed,
        precision=args.precision,
        allow_noncentered=args.allow_noncentered,
        output_format=args.format,
    )
    dist = resolve_distribution(args.dist, args.seed, args.allow_noncentered)
    est = sample_upper_bound(
        args.dim,
        args.L,
        args.boundary,
        dist,
        args.samples,
        args.seed,
        threads=args.threads,
        keep_energies=True,
    )
    n_sites = 1
    for s in est.side_lengths:
        n_sites *= s
    if args.format == "human":
        lines = [_header(cfg)]
        lines.append(
            f"sampled upper bound, d={est.dimension}, "
            f"{'x'.join(map(str, est.side_lengths))} {est.boundary}"
        )
        lines.append(
            f"  mean energy per site : {est.mean_per_site} "
            f"({decimal_string(est.mean_per_site, args.precision)}) "
            f"+- {est.stderr_per_site:.3g} over {est.samples} samples"
        )
        lines.append(f"  note: {est.note}")
        _emit("\n".join(lines) + "\n", args.output)
        return 0
    out = []
    for k, e in enumerate(est.energies):
        rec = {
            "index": k,
            "seed": args.seed,
            "energy": fraction_json(e),
            "per_site": decimal_string(e / n_sites, args.precision),
        }
        out.append(json.dumps(rec, separators=(",", ":")))
    summary = {
        "summary": True,
        "schema": "ea-bounds/1",
        "version": __version__,
        "config": cfg.as_dict(),
        "samples": est.samples,
        "side_lengths": list(est.side_lengths),
        "boundary": est.boundary,
        "mean_per_site": {
            **fraction_json(est.mean_per_site),
            "decimal": decimal_string(est.mean_per_site, args.precision),
        },
        "stderr_per_site": est.stderr_per_site,
        "note": est.note,
    }
    out.append(json.dumps(summary, separators=(",", ":")))
    _emit("\n".join(out) + "\n", args.output)
    return 0


def _gauge_masks_ok(geometry) -> bool:
    # exact gauge invariance for every sign pattern x every site, via the
    # identity: gauging site s is XOR with the incident-bond mask
    table = antialign_table(geometry)
    energies, _ = kernels.pm_minima(table, geometry.n_bonds)
    for site in range(geometry.n_sites):
        flip = 0
        for b in incident_bonds(geometry, site):
            flip |= 1 << b
        for mask in range(1 << geometry.n_bonds):
            if energies[mask] != energies[mask ^ flip]:
                return False
    return True


def cmd_verify(args) -> int:
    cfg = RunConfig(
        command="verify",
        samples=args.samples,
        draws=args.draws,
        seed=args.seed,
        output_format="human",
    )
    square, cube = make_cell(2), make_cell(3)
    checks: list[tuple[str, bool, str]] = []

    ok = _gauge_masks_ok(square) and _gauge_masks_ok(cube)
    checks.append(("classical gauge invariance (16 square + 4096 cube patterns)", ok, ""))

    census = frustration_census(cube)
    counts = {k: sum(v.values()) for k, v in census.items()}
    ok = set(counts) == {0, 2, 4, 6} and sum(counts.values()) == 4096
    checks.append(("cube face-parity census", ok, f"{counts}"))

    rep = verify_cell_inequality_sample(2, 4, bernoulli(1), args.seed, args.samples, threads=args.threads)
    ok = rep.holds
    checks.append(
        (
            f"cell-sum inequality, 4x4 periodic, {rep.samples} samples",
            ok,
            f"{rep.samples - rep.violations}/{rep.samples} hold, min gap {rep.min_gap}",
        )
    )

    ok = True
    detail = ""
    for boundary in ("free", "periodic"):
        lattice = make_lattice(2, (4, 4), boundary)
        for k in range(args.draws):
            inst = draw_instance(lattice, bernoulli(1), args.seed + 1, k)
            e_dp, arg = exact_ground_state(inst)
            ints = [int(v) for v in inst.couplings.values]
            e_ex, _ = kernels.exhaustive_ground(lattice.n_sites, lattice.bonds, ints)
            if e_dp != e_ex:
                ok = False
                detail = f"mismatch at {boundary} draw {k}: {e_dp} vs {e_ex}"
                break
    checks.append((f"row DP vs exhaustive, 4x4 both boundaries, {args.draws} draws", ok, detail))

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    ok = True
    for _ in range(20):
        J_mask = int(rng.integers(0, 16))
        site = int(rng.integers(0, 4))
        J = CouplingAssignment.from_bitmask(J_mask, 4)
        h0 = quantum.build_hamiltonian(square, J, quantum.XZ)
        h1 = quantum.build_hamiltonian(square, gauge_transform(square, J, site), quantum.XZ)
        s0 = quantum.ground_energy(h0, full=True).eigenvalues
        s1 = quantum.ground_energy(h1, full=True).eigenvalues
        dev = float(np.max(np.abs(s0 - s1)))
        worst = max(worst, dev)
        if dev > 1e-9:
            ok = False
    checks.append(("quantum XZ gauge spectra, 20 square patterns", ok, f"max dev {worst:.2e}"))

    lines = [_header(cfg)]
    width = max(len(c[0]) for c in checks) + 2
    passed = 0
    for name, okc, detail in checks:
        status = "pass" if okc else "FAIL"
        passed += okc
        suffix = f"  ({detail})" if detail else ""
        lines.append(f"  {name:<{width}}{status}{suffix}")
    lines.append(f"overall: {passed}/{len(checks)} pass")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if passed == len(checks) else 1


def cmd_analyze_frustration(args) -> int:
    cfg = RunConfig(
        command="analyze frustration",
        dimension=args.dim,
        precision=args.precision,
        output_format=args.format,
    )
    cell = make_cell(args.dim)
    census = frustration_census(cell)
    if args.format == "json":
        payload = {
            "schema": "ea-bounds/1",
            "version": __version__,
            "kind": "frustration-census",
            "config": cfg.as_dict(),
            "census": [
                {
                    "frustrated_faces": k,
                    "patterns": sum(v.values()),
                    "ground_energies": {str(e): c for e, c in v.items()},
                }
                for k, v in census.items()
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
        return 0
    total = 1 << cell.n_bonds
    lines = [_header(cfg)]
    lines.append(
        f"frustrated-face census over all {total} sign patterns "
        f"({'square' if args.dim == 2 else 'cube'})"
    )
    lines.append("  frustrated  patterns  ground energies")
    for k, v in census.items():
        lines.append(f"  {k:<11}{sum(v.values()):<10}{v}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _add_common(p, *, samples: int, fmt: tuple[str, ...]) -> None:
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=6)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--allow-noncentered", action="store_true")
    p.add_argument("--format", choices=fmt, default=fmt[0])
    p.add_argument("-o", "--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ea-bounds",
        description="Rigorous cell-based bounds on spin-glass ground-state energies.",
    )
    ap.add_argument("--version", action="version", version=f"ea-bounds {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", help="lower bounds from cell averages")
    bsub = bound.add_subparsers(dest="variant", required=True)

    bc = bsub.add_parser("classical", help="classical Ising cell bound")
    bc.add_argument("--dim", type=int, choices=(2, 3), required=True)
    bc.add_argument("--dist", default="bernoulli")
    _add_common(bc, samples=100_000, fmt=("human", "json"))
    bc.set_defaults(func=cmd_bound_classical)

    bq = bsub.add_parser("quantum", help="anisotropy sweep of the quantum cell bound")
    bq.add_argument("--dim", type=int, choices=(2, 3), required=True)
    bq.add_argument("--dist", default="bernoulli")
    bq.add_argument("--alpha-x", default="0", help="comma-separated grid, must include 0")
    _add_common(bq, samples=20_000, fmt=("human", "json", "csv"))
    bq.set_defaults(func=cmd_bound_quantum)

    up = sub.add_parser("upper", help="sampled exact finite-lattice upper bounds")
    up.add_argument("--dim", type=int, choices=(2, 3), required=True)
    up.add_argument("--L", type=int, required=True)
    up.add_argument("--boundary", choices=("free", "periodic"), default="free")
    up.add_argument("--dist", default="bernoulli")
    _add_common(up, samples=100, fmt=("jsonl", "human"))
    up.set_defaults(func=cmd_upper)

    ver = sub.add_parser("verify", help="run the property-check suite")
    ver.add_argument("--draws", type=int, default=50, help="draws for the DP oracle check")
    _add_common(ver, samples=100, fmt=("human",))
    ver.set_defaults(func=cmd_verify)

    an = sub.add_parser("analyze", help="structure analyses")
    asub = an.add_subparsers(dest="variant", required=True)
    af = asub.add_parser("frustration", help="sign-pattern census by frustrated faces")
    af.add_argument("--dim", type=int, choices=(2, 3), default=3)
    _add_common(af, samples=0, fmt=("human", "json"))
    af.set_defaults(func=cmd_analyze_frustration)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except EigensolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
