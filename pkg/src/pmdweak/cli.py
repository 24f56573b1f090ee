"""Command-line front end.

Exit codes: 0 ok, 2 input error, 3 physics error (light annihilated or a
divergent quotient), 4 unsupported network topology.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analytic
from .errors import AnnihilationError, DivergentWeakValueError, TopologyError, ValidationError
from .jones import Z_AXIS, bloch_vector, plus_state
from .netspec import Experiment, Network, Pdl, Pmd, SpecError, load_experiment, to_canonical
from .propagate import pointer_sigma_z, propagate
from .pulse import GaussianPulse, Grid

EXIT_OK, EXIT_INPUT, EXIT_PHYSICS, EXIT_TOPOLOGY = 0, 2, 3, 4

def fmt(x) -> str:
    """12 significant digits; scientific notation below 1e-4."""
    if x is None:
        return "n/a"
    return f"{x:.12g}"

def _is_z(axis) -> bool:
    return abs(axis.z - 1.0) <= 1e-12

def closed_form_toa(exp: Experiment) -> float | None:
    """Exact analytic ``<t>`` when the network is one of the closed-form cases."""
    trunks = exp.network.trunks
    psi0 = exp.input_state
    if len(trunks) == 1 and isinstance(trunks[0], Pmd):
        pmd = trunks[0]
        return 0.5 * pmd.dgd * float(bloch_vector(psi0) @ pmd.axis.vector)
    if len(trunks) == 2 and isinstance(trunks[0], Pmd) and isinstance(trunks[1], Pdl):
        pmd, pdl = trunks
        if not _is_z(pmd.axis):
            return None
        if pdl.is_polarizer:
            ratio = pmd.dgd / (2 * exp.pulse.t_c)
            sz = analytic.sigma_z_exact_pure(
                psi0, plus_state(pdl.axis), pmd.dgd, exp.pulse.omega0, ratio)
            return 0.5 * pmd.dgd * sz
        return analytic.mean_toa_pmd_pdl(
            psi0, pmd.dgd, exp.pulse.omega0, pdl.mu, pdl.axis, exp.pulse.t_c)
    return None

@dataclass
class RunReport:
    mean_toa: float
    sigma_z_pointer: float | None
    survival_fraction: float
    analytic_prediction: float | None = None

    @property
    def abs_difference(self) -> float | None:
        if self.analytic_prediction is None:
            return None
        return abs(self.mean_toa - self.analytic_prediction)

    def lines(self) -> list[str]:
        return [
            f"mean_toa_ps: {fmt(self.mean_toa)}",
            f"sigma_z_pointer: {fmt(self.sigma_z_pointer)}",
            f"survival_fraction: {fmt(self.survival_fraction)}",
            f"analytic_prediction_ps: {fmt(self.analytic_prediction)}",
            f"abs_difference_ps: {fmt(self.abs_difference)}",
        ]

def run_report(exp: Experiment):
    result = propagate(exp.network, exp.pulse, exp.input_state, exp.grid)
    dgd = exp.network.total_dgd
    report = RunReport(
        mean_toa=result.mean_toa,
        sigma_z_pointer=pointer_sigma_z(result, dgd) if dgd > 0 else None,
        survival_fraction=result.survival_fraction,
        analytic_prediction=closed_form_toa(exp),
    )
    return result, report

def cmd_simulate(args) -> int:
    exp = load_experiment(args.spec)
    result, report = run_report(exp)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    f = result.field
    with open(out / "trace.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_ps", "intensity", "re_h", "im_h", "re_v", "im_v"])
        for row in zip(f.grid.t, result.intensity, f.h.real, f.h.imag, f.v.real, f.v.imag):
            w.writerow([fmt(float(x)) for x in row])
    (out / "report.txt").write_text("\n".join(report.lines()) + "\n")
    print("\n".join(report.lines()))
    return EXIT_OK

def _single_pmd_pdl(exp: Experiment):
    trunks = exp.network.trunks
    if not (len(trunks) == 2 and isinstance(trunks[0], Pmd) and isinstance(trunks[1], Pdl)):
        raise TopologyError("sweep needs exactly one PMD trunk followed by one PDL trunk")
    if not _is_z(trunks[0].axis):
        raise TopologyError("sweep needs the PMD axis along z")
    return trunks

def sweep_rows(exp: Experiment, ratios):
    """Pointer readings for each ``dgd / t_c`` in ``ratios``.

    The carrier is rescaled with the DGD so the phase ``dgd * omega0`` of the
    file (and hence the polarization geometry) stays fixed.
    """
    pmd, pdl = _single_pmd_pdl(exp)
    t_c = exp.pulse.t_c
    phase = pmd.dgd * exp.pulse.omega0
    psi0 = exp.input_state
    rows = []
    for r in ratios:
        b = r * t_c
        omega0 = phase / b if pmd.dgd > 0 else exp.pulse.omega0
        net = Network([Pmd(b, Z_AXIS), pdl], exp.network.name)
        pulse = GaussianPulse(t_c, omega0)
        grid = Grid.for_pulse(t_c, b, exp.grid.n)
        res = propagate(net, pulse, psi0, grid)
        numeric = pointer_sigma_z(res, b)
        if pdl.is_polarizer:
            predicted = analytic.sigma_z_exact_pure(psi0, plus_state(pdl.axis), b, omega0, r / 2)
        else:
            predicted = analytic.mean_toa_pmd_pdl(psi0, b, omega0, pdl.mu, pdl.axis, t_c) / (b / 2)
        rows.append((r, numeric, predicted, abs(numeric - predicted)))
    return rows

def _ratios(text: str):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratio list {text!r}") from None
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise argparse.ArgumentTypeError("ratios must be positive finite numbers")
    return vals

def cmd_sweep(args) -> int:
    exp = load_experiment(args.spec)
    rows = sweep_rows(exp, args.ratios)
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ratio", "pointer_numeric", "pointer_analytic", "abs_diff"])
        for row in rows:
            w.writerow([fmt(x) for x in row])
    return EXIT_OK

def weak_lines(exp: Experiment) -> list[str]:
    net, pulse, psi0 = exp.network, exp.pulse, exp.input_state
    two_trunk = len(net) == 2 and isinstance(net.trunks[0], Pmd) and isinstance(net.trunks[1], Pdl)
    terms = analytic.multi_trunk_weak_values(net, psi0, pulse.omega0,
                                             require_alternating=not two_trunk)
    predicted = sum(t.contribution for t in terms)
    numeric = propagate(net, pulse, psi0, exp.grid).mean_toa

    lines = [f"network: {net.name} ({len(net)} trunks), t_c = {fmt(pulse.t_c)} ps"]
    for t in terms:
        lines.append(f"trunk {t.index}: dgd = {fmt(t.dgd)} ps, w = {fmt(t.w)}, "
                     f"dgd/2 * w = {fmt(t.contribution)} ps")
    diff = abs(numeric - predicted)
    lines += [
        f"predicted_toa_ps: {fmt(predicted)}",
        f"numeric_toa_ps: {fmt(numeric)}",
        f"difference_ps: {fmt(diff)}",
    ]
    # Halving eps = dgd/t_c by doubling t_c keeps every carrier phase fixed.
    wide = GaussianPulse(2 * pulse.t_c, pulse.omega0)
    grid2 = Grid.for_pulse(wide.t_c, net.total_dgd, exp.grid.n)
    diff2 = abs(propagate(net, wide, psi0, grid2).mean_toa - predicted)
    eps = net.total_dgd / pulse.t_c
    ratio = diff / diff2 if diff2 > 0 else math.inf
    lines += [
        f"# first-order remainder: {fmt(diff)} ps at eps = {fmt(eps)}, "
        f"{fmt(diff2)} ps at eps/2 (t_c doubled); ratio {fmt(ratio)}",
        "# a ratio near 4 indicates the expected C * eps^2 remainder",
    ]
    return lines

def cmd_weak(args) -> int:
    exp = load_experiment(args.spec)
    print("\n".join(weak_lines(exp)))
    return EXIT_OK

def cmd_validate(args) -> int:
    exp = load_experiment(args.spec)
    if args.require_alternating and not exp.network.is_alternating:
        raise TopologyError("network does not alternate PMD, PDL, ..., PMD")
    sys.stdout.write(to_canonical(exp))
    return EXIT_OK

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmdweak",
        description="Pulse propagation through PMD/PDL trunks and weak-measurement readouts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="propagate a pulse, write trace.csv and report.txt")
    p.add_argument("spec")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="pointer vs measurement strength for PMD + PDL")
    p.add_argument("spec")
    p.add_argument("--ratios", type=_ratios, required=True,
                   help="comma-separated dgd/t_c values")
    p.add_argument("-o", "--output", required=True, help="output CSV file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("weak", help="first-order weak values per PMD trunk")
    p.add_argument("spec")
    p.set_defaults(func=cmd_weak)

    p = sub.add_parser("validate", help="check a spec file and print its canonical form")
    p.add_argument("spec")
    p.add_argument("--require-alternating", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser

def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ValidationError, OSError) as exc:
        print(f"pmdweak: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AnnihilationError, DivergentWeakValueError) as exc:
        print(f"pmdweak: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except TopologyError as exc:
        print(f"pmdweak: {exc}", file=sys.stderr)
        return EXIT_TOPOLOGY

if __name__ == "__main__":
    sys.exit(main())
