"""Command-line surface.

Subcommands cover the full pipeline: synthesize a coin program (built-in
target or schedule file), simulate it, compile it to a pulse schedule,
sample finite-count statistics, score similarity/entropy, verify the
pairwise purity criterion, extract random bits, and regenerate the full
set of reference data files.

Exit codes: 0 ok, 2 parse error, 3 infeasible schedule, 4 pulse
collision, 5 domain or state error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fileio, measure, noise, pulses, synth, walk
from .errors import (
    CoinWalkError,
    CollisionError,
    InfeasibleScheduleError,
    ParseError,
)
from .state import CoinProgram

DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_COLLISION = 4
EXIT_DOMAIN = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coinwalk", description=__doc__)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"base RNG seed (default {DEFAULT_SEED})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="build a coin program")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--target", choices=("hadamard", "gaussian", "uniform"))
    group.add_argument("--schedule", type=Path, help="target schedule file (t x p lines)")
    p.add_argument("--steps", type=int, help="step count for built-in targets")
    p.add_argument("--no-final-layer", action="store_true",
                   help="omit the disentangling layer")
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("simulate", help="run a program, one distribution file per step")
    p.add_argument("program", type=Path)
    p.add_argument("--out-dir", type=Path, required=True)

    p = sub.add_parser("compile", help="compile a program to a pulse schedule")
    p.add_argument("program", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--calibration", type=Path, help="anchor file (phase voltage lines)")
    p.add_argument("--t-ns", type=float, default=None)
    p.add_argument("--dt-ns", type=float, default=None)
    p.add_argument("--sagnac-ns", type=float, default=None)
    p.add_argument("--width-ns", type=float, default=None)
    p.add_argument("--rep-ns", type=float, default=None)
    p.add_argument("--launch-offset", type=float, default=0.0)

    p = sub.add_parser("sample", help="multinomial counts with bootstrap error bars")
    p.add_argument("distribution", type=Path)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--resamples", type=int, default=500)
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("entropy", help="Shannon entropy of a distribution, in bits")
    p.add_argument("distribution", type=Path)

    p = sub.add_parser("similarity", help="overlap sum sqrt(p q) of two distributions")
    p.add_argument("dist_a", type=Path)
    p.add_argument("dist_b", type=Path)

    p = sub.add_parser("verify-purity", help="pairwise purity report for a built-in walk")
    p.add_argument("--target", choices=("gaussian", "uniform"), required=True)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--gamma", type=float, default=1.0,
                   help="off-diagonal retention (1 = pure)")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("extract-bits", help="draw positions and emit random bits")
    p.add_argument("distribution", type=Path)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("reproduce", help="regenerate all reference data files")
    p.add_argument("--out-dir", type=Path, required=True)
    return parser


def _built_in_program(target: str, steps: int, final_layer: bool) -> CoinProgram:
    if steps is None or steps < 1:
        raise ParseError("--steps must be a positive integer for built-in targets")
    if target == "hadamard":
        return walk.hadamard_program(steps, walk.circular_initial())
    prog = synth.gaussian_program(steps) if target == "gaussian" else synth.uniform_program(steps)
    if not final_layer:
        prog = CoinProgram(steps=prog.steps, cells=prog.cells, initial=prog.initial)
    return prog


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _cmd_synthesize(args) -> None:
    if args.target is not None:
        prog = _built_in_program(args.target, args.steps, not args.no_final_layer)
    else:
        sched = fileio.schedule_targets_from_text(_read(args.schedule))
        plan = synth.plan_amplitudes(sched)
        prog = synth.synthesize_coins(plan)
        if not args.no_final_layer:
            prog = CoinProgram(
                steps=prog.steps,
                cells=prog.cells,
                initial=prog.initial,
                final_layer=synth._final_layer_from_plan(plan),
            )
    args.output.write_text(fileio.program_to_text(prog))


def _cmd_simulate(args) -> None:
    prog = fileio.program_from_text(_read(args.program))
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for report in walk.run_program(prog):
        path = args.out_dir / f"dist_t{report.step:02d}.txt"
        path.write_text(fileio.distribution_to_text(report.distribution))


def _timing_model(args) -> pulses.TimingModel:
    overrides = {
        "t_ns": args.t_ns,
        "dt_ns": args.dt_ns,
        "sagnac_delay_ns": args.sagnac_ns,
        "pulse_width_ns": args.width_ns,
        "rep_period_ns": args.rep_ns,
    }
    return pulses.TimingModel(**{k: v for k, v in overrides.items() if v is not None})


def _cmd_compile(args) -> None:
    prog = fileio.program_from_text(_read(args.program))
    cal = pulses.Calibration()
    if args.calibration is not None:
        cal = fileio.calibration_from_text(_read(args.calibration))
    schedule = pulses.compile_schedule(
        prog, _timing_model(args), cal, launch_offset_ns=args.launch_offset
    )
    args.output.write_text(fileio.pulse_schedule_to_text(schedule))


def _cmd_sample(args, seed: int) -> None:
    dist = fileio.distribution_from_text(_read(args.distribution))
    counts = noise.sample_counts(dist, args.events, seed)
    errors = noise.bootstrap_errorbars(counts, args.resamples, seed + 1, theory=dist)
    n = sum(counts.values())
    lines = [f"# events {n}  sigma_F {errors.sigma_similarity!r}"]
    for x in sorted(counts):
        lines.append(f"{x} {counts[x]} {errors.sigma_p[x]!r}")
    args.output.write_text("\n".join(lines) + "\n")


def _cmd_verify_purity(args) -> None:
    prog = _built_in_program(args.target, args.steps, final_layer=True)
    final = walk.run_program(prog)[-1].state
    records = measure.purity_criterion(final, gamma=args.gamma)
    lines = ["# x  |rho_x,x+2|^2  rho_xx*rho_x+2,x+2  pass"]
    for r in records:
        lines.append(f"{r.x} {r.lhs:.6f} {r.rhs:.6f} {'yes' if r.passed else 'no'}")
    text = "\n".join(lines) + "\n"
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_extract_bits(args, seed: int) -> None:
    dist = fileio.distribution_from_text(_read(args.distribution))
    counts = noise.sample_counts(dist, args.events, seed)
    samples = [x for x in sorted(counts) for _ in range(counts[x])]
    result = measure.extract_bits(samples, args.steps)
    args.output.write_text(result.bits + "\n")
    print(
        f"accepted {result.n_accepted} samples, rejected {result.n_rejected}, "
        f"{result.bits_per_sample} bits each",
        file=sys.stderr,
    )


def _cmd_reproduce(args, seed: int) -> None:
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    steps = 11
    programs = {
        "hadamard": walk.hadamard_program(steps, walk.circular_initial()),
        "gaussian": synth.gaussian_program(steps),
        "uniform": synth.uniform_program(steps),
    }
    reports = {name: walk.run_program(p) for name, p in programs.items()}

    # Step-11 distributions: theory next to jittered finite-count emulation.
    for i, (name, fig) in enumerate(
        (("hadamard", "fig2a"), ("gaussian", "fig2b"), ("uniform", "fig2c"))
    ):
        theory = reports[name][steps].distribution
        nm = noise.NoiseModel(coin_angle_jitter_rad=0.01, seed=seed + 10 * i)
        noisy = walk.run_program(noise.perturb_program(programs[name], nm))
        counts = noise.sample_counts(noisy[steps].distribution, 10_000, seed + 10 * i + 1)
        n = sum(counts.values())
        sampled = {x: c / n for x, c in counts.items()}
        errors = noise.bootstrap_errorbars(counts, 500, seed + 10 * i + 2, theory=theory)
        f_val = measure.similarity(sampled, theory)
        lines = [
            f"# {name} step {steps}: x P_theory P_sampled sigma",
            f"# similarity {f_val!r} sigma_F {errors.sigma_similarity!r}",
        ]
        for x in sorted(theory):
            lines.append(
                f"{x} {theory[x]!r} {sampled.get(x, 0.0)!r} "
                f"{errors.sigma_p.get(x, 0.0)!r}"
            )
        (out / f"{fig}.txt").write_text("\n".join(lines) + "\n")

    # Odd-step distributions for the two engineered walks.
    for name, fig in (("gaussian", "fig3a"), ("uniform", "fig3b")):
        lines = [f"# {name}: t x P"]
        for t in range(1, steps + 1, 2):
            for x, prob in sorted(reports[name][t].distribution.items()):
                lines.append(f"{t} {x} {prob!r}")
        (out / f"{fig}.txt").write_text("\n".join(lines) + "\n")

    # Entropy versus step for the three walks.
    lines = ["# t R_hadamard R_gaussian R_uniform"]
    for t in range(1, steps + 1):
        values = [measure.shannon_entropy(reports[n][t].distribution)
                  for n in ("hadamard", "gaussian", "uniform")]
        lines.append(f"{t} " + " ".join(repr(v) for v in values))
    (out / "fig4.txt").write_text("\n".join(lines) + "\n")

    # Pairwise purity tables for the ideal 9-step walks.
    for name, table in (("uniform", "table1"), ("gaussian", "table2")):
        prog = _built_in_program(name, 9, final_layer=True)
        final = walk.run_program(prog)[-1].state
        lines = [f"# {name} 9-step: x |rho_x,x+2|^2 rho_xx*rho_x+2,x+2"]
        for r in measure.purity_criterion(final):
            lines.append(f"{r.x} {r.lhs:.4f} {r.rhs:.4f}")
        (out / f"{table}.txt").write_text("\n".join(lines) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synthesize":
            _cmd_synthesize(args)
        elif args.command == "simulate":
            _cmd_simulate(args)
        elif args.command == "compile":
            _cmd_compile(args)
        elif args.command == "sample":
            print(f"seed {args.seed}", file=sys.stderr)
            _cmd_sample(args, args.seed)
        elif args.command == "entropy":
            dist = fileio.distribution_from_text(_read(args.distribution))
            print(repr(measure.shannon_entropy(dist)))
        elif args.command == "similarity":
            a = fileio.distribution_from_text(_read(args.dist_a))
            b = fileio.distribution_from_text(_read(args.dist_b))
            print(repr(measure.similarity(a, b)))
        elif args.command == "verify-purity":
            _cmd_verify_purity(args)
        elif args.command == "extract-bits":
            print(f"seed {args.seed}", file=sys.stderr)
            _cmd_extract_bits(args, args.seed)
        elif args.command == "reproduce":
            print(f"seed {args.seed}", file=sys.stderr)
            _cmd_reproduce(args, args.seed)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleScheduleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CollisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except CoinWalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
