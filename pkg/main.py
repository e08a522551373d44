# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Main entry point for the network inference simulator.
# Runs the randomized verification suites, end-to-end network inference against
# the classical oracle and the preprocessed matrix QRAM build. Writes JSON reports
# and per-stage CSV files and maps failures onto the exit-code contract.
# -----------------------------------------------------------------------------

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

import config
import polynomials
import utils
from errors import ConfigError, QnnError, exit_code_for
from models import RunConfig, StageRecord
from network import circuit_qubits, load_network_spec, network_input, quantum_forward
from qram import build_matrix_structure, rescale_contraction
from verification import SUITES, run_suites

logger = logging.getLogger(__name__)

STAGE_CSV_HEADERS = [
    "stage",
    "alpha",
    "ancillas",
    "eps_bound",
    "eps_actual",
    "norm_floor",
    "norm_value",
    "passed",
]


def write_stage_records_to_csv(filepath: Path, stages: List[StageRecord]) -> None:
    """
    Writes one row per pipeline stage.

    Args:
        filepath: The path to the CSV file.
        stages: Stage records of an InferenceReport.
    """
    try:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(STAGE_CSV_HEADERS)
            for s in stages:
                writer.writerow(
                    [
                        s.stage,
                        repr(s.alpha),
                        s.ancillas,
                        repr(s.eps_bound),
                        "N/A" if s.eps_actual is None else repr(s.eps_actual),
                        "N/A" if s.norm_floor is None else repr(s.norm_floor),
                        "N/A" if s.norm_value is None else repr(s.norm_value),
                        s.passed,
                    ]
                )
        logger.info(f"Successfully wrote {len(stages)} stage records to '{filepath}'.")
    except IOError as e:
        logger.error(f"Failed to write stage records to CSV file '{filepath}': {e}", exc_info=True)


def print_stage_table(doc: Dict[str, Any]) -> None:
    """Prints the stage table of a report document."""
    print(f"{'stage':<28} {'alpha':>12} {'anc':>6} {'eps_bound':>11} {'eps_actual':>11}  ok")
    for row in doc.get("stages", []):
        actual = row["eps_actual"]
        print(
            f"{row['stage']:<28} {row['alpha']:>12.5g} {row['ancillas']:>6d} {row['eps_bound']:>11.3e} "
            f"{'-' if actual is None else format(actual, '.3e'):>11}  {'yes' if row['passed'] else 'NO'}"
        )
    print(
        f"l2 error {doc['l2_error']:.3e} vs eps {doc['epsilon']:.3e}; "
        f"argmax agree: {doc['argmax_agree']}; passed: {doc['passed']}"
    )


def print_lemma_summary(doc: Dict[str, Any]) -> None:
    """Prints the per-suite pass counts of a verification document."""
    for name, counts in doc["summary"].items():
        print(f"{name:<24} {counts['passed']:>5}/{counts['cases']:<5} {'ok' if counts['passed'] == counts['cases'] else 'FAILED'}")
    print(f"passed: {doc['passed']}")


def _report_path(cfg: RunConfig, default: Path) -> Path:
    return Path(cfg.out_path) if cfg.out_path else default


def erf_certificates(eps: float = config.ERF_CERTIFICATE_EPS) -> List[Dict[str, Any]]:
    """Certified erf polynomials at the activation slopes, as polynomial dumps."""
    return [{"m": m, **utils.poly_to_doc(polynomials.erf_poly(m, eps))} for m in config.ERF_SLOPES]


def cmd_verify_lemmas(cfg: RunConfig) -> int:
    """
    Runs every verification suite and writes one record per (suite, case).

    Returns:
        EXIT_OK when every case passes, EXIT_BOUND_VIOLATION otherwise.
    """
    if cfg.inject_fault is not None and cfg.inject_fault not in SUITES:
        raise ConfigError(f"Unknown suite '{cfg.inject_fault}'; choose one of {sorted(SUITES)}.")
    logger.info(f"Running verification suites: cases={cfg.cases} seed={cfg.seed} mode={cfg.mode}")
    records = run_suites(
        cases=cfg.cases,
        seed=cfg.seed,
        realize=cfg.mode == "circuit",
        inject_fault=cfg.inject_fault,
        tolerance=cfg.tolerance,
    )
    summary: Dict[str, Dict[str, int]] = {}
    for r in records:
        counts = summary.setdefault(r.lemma, {"cases": 0, "passed": 0})
        counts["cases"] += 1
        counts["passed"] += int(r.passed)
    failed = sorted(name for name, counts in summary.items() if counts["passed"] < counts["cases"])
    doc = {
        "command": "verify",
        "mode": cfg.mode,
        "seed": cfg.seed,
        "cases": cfg.cases,
        "records": [r.model_dump() for r in records],
        "summary": summary,
        "failed": failed,
        "passed": not failed,
        "erf_polynomials": erf_certificates(),
    }
    path = utils.write_json(_report_path(cfg, config.DEFAULT_REPORT_FILE), doc)
    logger.info(f"Verification report written to '{path}'.")
    print_lemma_summary(doc)
    if failed:
        logger.error(f"Bound or ledger violations in: {', '.join(failed)}")
        return config.EXIT_BOUND_VIOLATION
    return config.EXIT_OK


def cmd_run_network(cfg: RunConfig) -> int:
    """
    Runs one network spec through the coherent pipeline and compares it with the
    classical forward pass.

    Returns:
        EXIT_OK iff the final error is within eps and every stage bound holds.

    Raises:
        ConfigError: If the spec is invalid or, in circuit mode, too wide to materialize.
    """
    spec = load_network_spec(cfg.config_path)
    if cfg.mode == "circuit":
        qubits = circuit_qubits(spec)
        if qubits > config.CIRCUIT_QUBIT_LIMIT:
            raise ConfigError(
                f"Circuit mode needs at least {qubits} qubits for '{spec.name}', "
                f"above the limit of {config.CIRCUIT_QUBIT_LIMIT}."
            )
    report = quantum_forward(
        spec,
        network_input(spec),
        realize=cfg.mode == "circuit",
        shots=cfg.shots,
        seed=cfg.seed,
        rescale=cfg.rescale,
    )
    path = _report_path(cfg, config.DEFAULT_REPORT_FILE)
    doc = report.model_dump()
    utils.write_json(path, doc)
    csv_path = path.with_suffix(".csv") if cfg.out_path else config.DEFAULT_STAGE_CSV_FILE
    write_stage_records_to_csv(csv_path, report.stages)
    logger.info(f"Inference report written to '{path}'.")
    print_stage_table(doc)
    return config.EXIT_OK if report.passed else config.EXIT_BOUND_VIOLATION


def cmd_build_qram(cfg: RunConfig) -> int:
    """
    Builds the preprocessed matrix structure of a tensor file and writes it as JSON.

    Raises:
        ConfigError: If ||W||_2 > 1 and --rescale was not given.
    """
    w = utils.load_tensor_file(cfg.config_path)
    if w.ndim != 2:
        raise ConfigError(f"Expected a matrix in '{cfg.config_path}', got shape {w.shape}.")
    structure = build_matrix_structure(rescale_contraction(w, cfg.rescale), cfg.angle_bits)
    path = utils.write_json(_report_path(cfg, config.DEFAULT_STRUCTURE_FILE), utils.structure_to_doc(structure))
    a = structure.col_norms
    ones = int(np.sum(np.isclose(a, 1.0, rtol=0.0, atol=1e-12)))
    print(
        f"N={a.shape[0]} d={structure.d} a_j: min={a.min():.6g} max={a.max():.6g} "
        f"mean={a.mean():.6g} ones={ones}"
    )
    logger.info(f"Matrix structure written to '{path}'.")
    return config.EXIT_OK


COMMANDS = {
    "verify": cmd_verify_lemmas,
    "run": cmd_run_network,
    "build-qram": cmd_build_qram,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Coherent residual network inference simulator.")
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to run.")
    parser.add_argument("--config", dest="config_path", help="Network spec (run) or matrix tensor file (build-qram).")
    parser.add_argument("--mode", choices=["semantic", "circuit"], default="semantic")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("--out", dest="out_path", help="Report or structure output path.")
    parser.add_argument("--cases", type=int, default=config.DEFAULT_CASES, help="Randomized cases per suite.")
    parser.add_argument("--shots", type=int, default=config.DEFAULT_SHOTS, help="Histogram samples (run).")
    parser.add_argument("--rescale", action="store_true", help="Divide an over-norm matrix by its spectral norm.")
    parser.add_argument("--angle-bits", type=int, default=config.DEFAULT_ANGLE_BITS, help=argparse.SUPPRESS)
    parser.add_argument("--tolerance", type=float, default=None, help=argparse.SUPPRESS)
    parser.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    return parser


def parse_run_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Raises:
        ConfigError: If the arguments fail validation.
    """
    args = build_parser().parse_args(argv)
    try:
        return RunConfig(**vars(args))
    except ValidationError as e:
        raise ConfigError(f"Invalid arguments:\n{e}") from e


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses the command line, runs the command and returns its exit status.
    """
    utils.setup_logging()
    if not config.validate_configuration():
        logger.error("Configuration validation failed. Exiting.")
        return config.EXIT_CONFIG_ERROR

    try:
        cfg = parse_run_config(argv)
        logger.info(f"== {cfg.command} (mode={cfg.mode}, seed={cfg.seed}) ==")
        return COMMANDS[cfg.command](cfg)
    except QnnError as e:
        code = exit_code_for(e)
        logger.error(f"{type(e).__name__}: {e} (exit {code})", exc_info=logger.isEnabledFor(logging.DEBUG))
        return code
    except Exception as e:
        logger.critical(f"Unhandled error: {e}", exc_info=True)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
