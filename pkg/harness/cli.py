"""
vqe-lab command line.

Subcommands:
    eig            spectrum of a builtin or file Hamiltonian, optionally tapered
    vqe            one seeded trial
    sweep          N trials -> JSON-lines records, summary JSON/CSV, config sidecar
    stats          summaries of existing record files
    similarity     probability-vector similarity report of a record file
    mitigate-test  calibration matrix and recovery error for a noise setting

Results go to stdout (or files); logs go to stderr.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from analysis.similarity import analyze_trials
from analysis.statistics import summarize_all
from core.config import get_settings
from core.errors import ConfigurationError, InvalidArgumentError, LabError
from core.logging import LabLogger, get_harness_logger
from core.models import (
    AnsatzForm,
    AnsatzSpec,
    ErrorClass,
    ExperimentConfig,
    HamiltonianSource,
    MitigationSettings,
    NoiseConfig,
    RecalcPolicy,
    ShotPolicy,
    SpsaConfig,
    SummaryStats,
)
from engine.hamiltonians import builtin_hamiltonian
from engine.mitigation import build_mitigation
from engine.noise import NoiseModel, load_calibration
from engine.pauli import diagonalize, format_hamiltonian, load_hamiltonian, taper, taper_sectors
from engine.statevector import format_ket
from harness.io import (
    read_config,
    read_many,
    read_records,
    write_config,
    write_records,
    write_summary_csv,
    write_summary_json,
)
from harness.sweep import resolve_hamiltonian, run_sweep, run_trial

logger = get_harness_logger("cli")

DEFAULT_CALIBRATION = "calibration_synthetic_2020-12-14.json"


# ============================================================================
# Parser
# ============================================================================

def _add_hamiltonian_args(p: argparse.ArgumentParser, flag: str = "--qubits") -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument(flag, type=int, choices=[2, 4], default=None,
                       help="Builtin H2 Hamiltonian (default: 2 qubits)")
    group.add_argument("--hamiltonian-file", type=Path, default=None,
                       help="Hamiltonian text file, one '<coefficient> <label>' per line")


def _add_noise_args(p: argparse.ArgumentParser, default_noise: str = "none") -> None:
    p.add_argument("--noise", choices=[e.value for e in ErrorClass], default=default_noise,
                   help=f"Error classes to simulate (default: {default_noise})")
    p.add_argument("--calibration", type=Path, default=None,
                   help=f"Device calibration JSON (default: bundled {DEFAULT_CALIBRATION})")


def _add_experiment_args(p: argparse.ArgumentParser) -> None:
    _add_hamiltonian_args(p)
    p.add_argument("--ansatz", choices=[f.value for f in AnsatzForm], default="ry")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--shots", default="1024", help="Shots per circuit, or 'exact' (default: 1024)")
    p.add_argument("--maxiter", type=int, default=1000)
    _add_noise_args(p)
    p.add_argument("--mitigate", action="store_true", help="Readout error mitigation on every evaluation")
    p.add_argument("--mitigate-final-only", action="store_true",
                   help="Mitigate only the final readout, not the SPSA objective")
    p.add_argument("--mitigation-shots", type=int, default=None,
                   help="Shots per calibration column (default: --shots)")
    p.add_argument("--recalc", default="none", help="none | exact | shots:<n>")
    p.add_argument("--seed", type=int, default=0, help="Master seed")
    p.add_argument("--spsa-a", type=float, default=None, help="Fixed SPSA gain a (skips calibration)")
    p.add_argument("--spsa-c", type=float, default=None, help="SPSA perturbation size c")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqe-lab",
        description="Simulated VQE ground-state searches for H2",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  vqe-lab eig --builtin 4
  vqe-lab eig --builtin 4 --taper-qubits 1 3 --sector -1 1
  vqe-lab vqe --qubits 2 --shots exact --maxiter 200
  vqe-lab sweep --qubits 2 --shots 8192 --trials 1000 --recalc exact --out output/s8192.jsonl
  vqe-lab sweep --qubits 2 --noise readout --mitigate --trials 50 --threads 4
  vqe-lab stats --in output/s8192.jsonl --csv output/s8192.csv
  vqe-lab similarity --in output/q4.jsonl --measure jt --circuit 0
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    eig = sub.add_parser("eig", help="Exact spectrum")
    _add_hamiltonian_args(eig, flag="--builtin")
    eig.add_argument("--taper-qubits", type=int, nargs="+", default=None,
                     help="Z-symmetry qubits to remove")
    eig.add_argument("--sector", type=int, nargs="+", default=None,
                     help="+1/-1 per tapered qubit")
    eig.add_argument("--all-sectors", action="store_true",
                     help="Spectrum of every sector of --taper-qubits")
    eig.add_argument("--decimals", type=int, default=6)
    eig.add_argument("--json", action="store_true", help="Machine-readable output")

    vqe = sub.add_parser("vqe", help="Run one trial")
    _add_experiment_args(vqe)
    vqe.add_argument("--trial-index", type=int, default=0)
    vqe.add_argument("--out", type=Path, default=None, help="Write the record as JSON lines")
    vqe.add_argument("--json", action="store_true", help="Print the full record")

    sweep = sub.add_parser("sweep", help="Run N trials")
    _add_experiment_args(sweep)
    sweep.add_argument("--trials", type=int, default=100)
    sweep.add_argument("--threads", type=int, default=None,
                       help="Worker processes (default: VQE_LAB_THREADS or 1)")
    sweep.add_argument("--out", type=Path, default=None,
                       help="Trial records (default: <output_dir>/trials.jsonl)")

    stats = sub.add_parser("stats", help="Summarize record files")
    stats.add_argument("--in", dest="inputs", type=Path, action="append", required=True)
    stats.add_argument("--reference", type=float, default=None, help="Reference energy (Hartree)")
    stats.add_argument("--band", type=float, default=None, help="Accuracy half-width (Hartree)")
    stats.add_argument("--out", type=Path, default=None, help="Summary JSON")
    stats.add_argument("--csv", type=Path, default=None, help="Summary CSV")

    sim = sub.add_parser("similarity", help="Probability-vector similarity report")
    sim.add_argument("--in", dest="input", type=Path, required=True)
    sim.add_argument("--measure", choices=["jt", "scalar"], default="jt")
    sim.add_argument("--circuit", type=int, default=0)
    sim.add_argument("--ground-energy", type=float, default=None)
    sim.add_argument("--out", type=Path, default=None, help="Report JSON (default: stdout)")

    mit = sub.add_parser("mitigate-test", help="Check readout mitigation on a random distribution")
    _add_hamiltonian_args(mit)
    _add_noise_args(mit, default_noise="readout")
    mit.add_argument("--shots", type=int, default=8192, help="Shots per calibration column")
    mit.add_argument("--seed", type=int, default=0)

    return parser


# ============================================================================
# Config assembly
# ============================================================================

def _num_qubits(args: argparse.Namespace) -> int:
    if args.hamiltonian_file is not None:
        return load_hamiltonian(args.hamiltonian_file).num_qubits
    return getattr(args, "qubits", None) or 2


def noise_from_args(args: argparse.Namespace) -> NoiseConfig:
    error_class = ErrorClass(args.noise)
    if error_class == ErrorClass.NONE:
        return NoiseConfig()
    path = args.calibration or get_settings().paths.data_dir / DEFAULT_CALIBRATION
    return NoiseConfig(error_class=error_class, calibration=load_calibration(path))


def config_from_args(args: argparse.Namespace, trials: int = 1) -> ExperimentConfig:
    """ExperimentConfig from the shared experiment flags."""
    defaults = get_settings().spsa
    try:
        if args.hamiltonian_file is not None:
            source = HamiltonianSource(file=args.hamiltonian_file)
        else:
            source = HamiltonianSource(qubits=args.qubits or 2)
        return ExperimentConfig(
            hamiltonian=source,
            ansatz=AnsatzSpec(form=AnsatzForm(args.ansatz), num_qubits=_num_qubits(args), depth=args.depth),
            shots=ShotPolicy.parse(args.shots),
            spsa=SpsaConfig(
                maxiter=args.maxiter,
                a=args.spsa_a,
                c=args.spsa_c if args.spsa_c is not None else defaults.c,
                alpha=defaults.alpha,
                gamma=defaults.gamma,
                stability=defaults.stability,
                target_step=defaults.target_step,
            ),
            noise=noise_from_args(args),
            mitigation=MitigationSettings(
                enabled=args.mitigate or args.mitigate_final_only,
                shots=args.mitigation_shots,
                final_only=args.mitigate_final_only,
            ),
            recalc=RecalcPolicy.parse(args.recalc),
            trials=trials,
            seed=args.seed,
        )
    except (ValidationError, ValueError) as e:
        raise ConfigurationError(f"Invalid experiment settings: {e}") from e


# ============================================================================
# Output helpers
# ============================================================================

def _print_summary(s: SummaryStats) -> None:
    print(f"[{s.quantity}] n={s.count} failed={s.failed}")
    print(f"  median   {s.median:.6f}   IQR [{s.q1:.6f}, {s.q3:.6f}]")
    print(f"  fences   [{s.lower_fence:.6f}, {s.upper_fence:.6f}]   outliers {s.n_outliers}")
    print(f"  accuracy {s.pct_in_accuracy:.1f}% +/- {s.pct_stderr:.1f}  "
          f"(|E - {s.reference_energy}| <= {s.band})")
    print(f"  below reference {s.n_below_reference}")
    if s.mean_circuit_executions is not None:
        print(f"  circuit executions per trial {s.mean_circuit_executions:.0f}")


def _summaries_or_none(records, reference=None, band=None) -> list[SummaryStats]:
    if not any(r.succeeded for r in records):
        return []
    return summarize_all(records, reference, band)


# ============================================================================
# Commands
# ============================================================================

def cmd_eig(args: argparse.Namespace) -> int:
    if args.hamiltonian_file is not None:
        h = load_hamiltonian(args.hamiltonian_file)
    else:
        h = builtin_hamiltonian(args.builtin or 2)

    if args.all_sectors:
        if not args.taper_qubits:
            raise InvalidArgumentError("--all-sectors needs --taper-qubits", "taper_qubits")
        results = []
        for sector, reduced in taper_sectors(h, args.taper_qubits):
            spectrum = diagonalize(reduced)
            results.append({"sector": list(sector), **spectrum.as_dict(args.decimals)})
        if args.json:
            print(json.dumps(results, indent=2))
        else:
            for item in results:
                values = ", ".join(f"{v:.{args.decimals}f}" for v in item["eigenvalues"])
                print(f"sector {item['sector']}: {values}")
        return 0

    if args.taper_qubits:
        sector = args.sector if args.sector is not None else [1] * len(args.taper_qubits)
        h = taper(h, args.taper_qubits, sector)

    spectrum = diagonalize(h)
    if args.json:
        payload = spectrum.as_dict(args.decimals)
        if args.taper_qubits:
            payload["hamiltonian"] = format_hamiltonian(h).splitlines()
        print(json.dumps(payload, indent=2))
        return 0

    if args.taper_qubits:
        print(format_hamiltonian(h))
        print()
    dominant = int(np.argmax(np.abs(spectrum.ground_state) ** 2))
    print(f"ground energy {spectrum.ground_energy:.{args.decimals}f} Ha "
          f"(dominant {format_ket(dominant, h.num_qubits)})")
    print("eigenvalues:")
    for value in spectrum.eigenvalues:
        print(f"  {value:.{args.decimals}f}")
    return 0


def cmd_vqe(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    record = run_trial(config, args.trial_index)
    if args.out is not None:
        write_records([record], args.out)
        write_config(config, args.out)

    if args.json:
        print(record.model_dump_json(indent=2))
    record.raise_for_status()
    if not args.json:
        print(f"trial {record.trial_index} seed {record.seed}")
        print(f"  final energy        {record.final_energy:.6f} Ha")
        if record.recalculated_energy is not None:
            print(f"  recalculated energy {record.recalculated_energy:.6f} Ha")
        print(f"  objective evaluations {record.objective_evaluations}, "
              f"circuit executions {record.circuit_executions}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    settings = get_settings()
    config = config_from_args(args, trials=args.trials)
    out = args.out or settings.paths.output_dir / "trials.jsonl"

    records = run_sweep(config, threads=args.threads)
    write_records(records, out)
    write_config(config, out)

    summaries = _summaries_or_none(records)
    if not summaries:
        print(f"All {len(records)} trials failed; records in {out}", file=sys.stderr)
        return 1

    write_summary_json(summaries, out.with_name(f"{out.stem}.summary.json"), config)
    write_summary_csv(summaries, out.with_name(f"{out.stem}.summary.csv"), config)
    for s in summaries:
        _print_summary(s)
    print(f"records: {out}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    records = read_many(args.inputs)
    summaries = _summaries_or_none(records, args.reference, args.band)
    if not summaries:
        raise InvalidArgumentError("No successful trials in the input files", "inputs")
    config = read_config(args.inputs[0]) if len(args.inputs) == 1 else None

    if args.out is not None:
        write_summary_json(summaries, args.out, config)
    if args.csv is not None:
        write_summary_csv(summaries, args.csv, config)
    for s in summaries:
        _print_summary(s)
    return 0


def _ground_energy_for(path: Path, records) -> float:
    """Exact ground energy from the sidecar config, else from the builtin matching the vector size."""
    config = read_config(path)
    if config is not None:
        return diagonalize(resolve_hamiltonian(config.hamiltonian)).ground_energy
    for record in records:
        if record.probabilities:
            size = len(record.probabilities[0].probabilities)
            qubits = {4: 2, 16: 4}.get(size)
            if qubits is None:
                break
            return diagonalize(builtin_hamiltonian(qubits)).ground_energy
    raise InvalidArgumentError(
        f"Cannot infer the ground energy for {path}; pass --ground-energy", "ground_energy"
    )


def cmd_similarity(args: argparse.Namespace) -> int:
    records = read_records(args.input)
    e0 = args.ground_energy if args.ground_energy is not None else _ground_energy_for(args.input, records)
    analysis = analyze_trials(records, e0, circuit=args.circuit, measure=args.measure)

    text = analysis.model_dump_json(indent=2)
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text + "\n", encoding="utf-8")
        counts = ", ".join(f"{k} {v}" for k, v in analysis.class_counts.items())
        print(f"{len(analysis.reports)} trials: {counts}")
    else:
        print(text)
    return 0


def cmd_mitigate_test(args: argparse.Namespace) -> int:
    q = _num_qubits(args)
    noise = noise_from_args(args)
    rng = np.random.default_rng(args.seed)

    model = build_mitigation(noise, q, args.shots, rng)
    p_true = rng.dirichlet(np.ones(2 ** q))
    noisy = NoiseModel(noise, q).apply_readout(p_true)
    result = model.correct(noisy)

    np.set_printoptions(precision=4, suppress=True, linewidth=120)
    print(f"calibration matrix ({args.shots} shots per column):")
    print(model.calibration_matrix.matrix)
    print(f"condition number {model.condition_number:.4f}")
    print(f"L1 error before mitigation {np.abs(noisy - p_true).sum():.6f}")
    print(f"L1 error after mitigation  {np.abs(result.probabilities - p_true).sum():.6f}")
    if result.warning:
        print(f"warning: {result.warning}", file=sys.stderr)
    return 0


COMMANDS = {
    "eig": cmd_eig,
    "vqe": cmd_vqe,
    "sweep": cmd_sweep,
    "stats": cmd_stats,
    "similarity": cmd_similarity,
    "mitigate-test": cmd_mitigate_test,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    settings = get_settings()
    LabLogger.initialize(
        level=settings.logging.level,
        log_format=settings.logging.format,
        log_to_file=settings.logging.log_to_file,
        log_file_path=settings.paths.logs_dir / settings.logging.log_file_name,
    )

    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except LabError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
