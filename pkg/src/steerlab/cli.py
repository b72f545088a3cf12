"""Command line front end: demo, check, sweep and lhs subcommands.

Exit codes: 0 when the requested run completed (whatever the verdict), 2 for
any input problem (bad flags, malformed or mismatched documents), 3 when the
feasibility solver hit its iteration cap.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lhs_lp
from .config import Tolerances
from .errors import DimensionError, SolverLimitError, SteerlabError
from .measurements import (
    SteeringProtocol,
    load_protocol,
    random_rank1_setting,
    settings_equal,
    tensor_protocol,
)
from .states import (
    DensityMatrix,
    EnsembleState,
    basis_ket,
    density_of,
    lc4_mixed,
    load_state,
    two_qubit_theta_state,
    random_mixed,
)
from .steering import (
    NO_PARADOX_CROSS_DUPLICATE,
    NO_PARADOX_PURITY,
    PARADOX,
    ParadoxReport,
    certify,
    conditional_states,
)

DEMO_NAMES = ("two-qubit", "lc4", "product")


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation, normalized to one flat record."""

    command: str
    fmt: str = "text"
    demo_name: str | None = None
    theta: float = math.pi / 4
    state_path: Path | None = None
    protocol_path: Path | None = None
    lp: bool = False
    dump_lp: Path | None = None
    tolerance: float | None = None
    seed: int = 0
    count: int = 20
    n_qubits: int = 2
    alice_qubits: int = 1
    rank: int = 1

    def tolerances(self) -> Tolerances:
        if self.tolerance is None:
            return Tolerances()
        return Tolerances(purity=self.tolerance, phase=self.tolerance)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerlab",
        description="Certify the two-setting 2-vs-1 steering gap for N-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the purity and phase-coincidence thresholds")

    p_demo = sub.add_parser("demo", help="run a built-in state and protocol")
    p_demo.add_argument("name", choices=DEMO_NAMES)
    p_demo.add_argument("--theta", type=float, default=math.pi / 4,
                        help="mixing angle in radians (two-qubit and lc4 demos)")
    p_demo.add_argument("--lp", action="store_true",
                        help="also run the independent feasibility oracle")
    add_common(p_demo)

    p_check = sub.add_parser("check", help="certify a state file against a protocol file")
    p_check.add_argument("--state", type=Path, required=True)
    p_check.add_argument("--protocol", type=Path, required=True)
    p_check.add_argument("--lp", action="store_true",
                         help="also run the independent feasibility oracle")
    p_check.add_argument("--dump-lp", type=Path, default=None,
                         help="write the assembled feasibility program as JSON")
    add_common(p_check)

    p_sweep = sub.add_parser("sweep", help="certify a batch of random states")
    p_sweep.add_argument("--n-qubits", type=int, default=2)
    p_sweep.add_argument("--alice-qubits", type=int, default=1)
    p_sweep.add_argument("--rank", type=int, default=1)
    p_sweep.add_argument("--count", type=int, default=20)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--protocol", type=Path, default=None,
                         help="fixed protocol file; omitted means fresh random settings per sample")
    add_common(p_sweep)

    p_lhs = sub.add_parser("lhs", help="run the feasibility oracle on its own")
    p_lhs.add_argument("--state", type=Path, required=True)
    p_lhs.add_argument("--protocol", type=Path, required=True)
    p_lhs.add_argument("--dump-lp", type=Path, default=None,
                       help="write the assembled feasibility program as JSON")
    add_common(p_lhs)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        fmt=getattr(args, "fmt", "text"),
        demo_name=getattr(args, "name", None),
        theta=getattr(args, "theta", math.pi / 4),
        state_path=getattr(args, "state", None),
        protocol_path=getattr(args, "protocol", None),
        lp=getattr(args, "lp", False),
        dump_lp=getattr(args, "dump_lp", None),
        tolerance=getattr(args, "tolerance", None),
        seed=getattr(args, "seed", 0),
        count=getattr(args, "count", 20),
        n_qubits=getattr(args, "n_qubits", 2),
        alice_qubits=getattr(args, "alice_qubits", 1),
        rank=getattr(args, "rank", 1),
    )


def _emit_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _emit_report(report: ParadoxReport, fmt: str) -> None:
    if fmt == "json":
        _emit_json(report.to_json_dict())
    else:
        print(report.to_text(), end="")


def _demo_instance(cfg: RunConfig) -> tuple[EnsembleState, SteeringProtocol]:
    if cfg.demo_name == "two-qubit":
        return two_qubit_theta_state(cfg.theta), tensor_protocol("z", "x", n_qubits=2)
    if cfg.demo_name == "lc4":
        return lc4_mixed(cfg.theta), tensor_protocol("zz", "yx", n_qubits=4)
    if cfg.demo_name == "product":
        product = EnsembleState(2, (1.0,), (basis_ket(2, 0),))
        return product, tensor_protocol("z", "x", n_qubits=2)
    raise DimensionError(f"unknown demo {cfg.demo_name!r}")


def cmd_demo(cfg: RunConfig) -> int:
    state, protocol = _demo_instance(cfg)
    report = certify(state, protocol, lp=cfg.lp, tolerances=cfg.tolerances())
    _emit_report(report, cfg.fmt)
    return 0


def _load_pair(cfg: RunConfig) -> tuple[EnsembleState | DensityMatrix, SteeringProtocol]:
    state = load_state(cfg.state_path.read_text())
    protocol = load_protocol(cfg.protocol_path.read_text())
    if protocol.alice_qubits >= state.n_qubits:
        raise DimensionError(
            f"protocol measures {protocol.alice_qubits} qubits but the state only has "
            f"{state.n_qubits}; Bob needs at least one"
        )
    return state, protocol


def _dump_lp(
    cfg: RunConfig, state: EnsembleState | DensityMatrix, protocol: SteeringProtocol
) -> None:
    tols = cfg.tolerances()
    rho = density_of(state) if isinstance(state, EnsembleState) else state
    set1 = conditional_states(rho, protocol, 1, tols)
    set2 = conditional_states(rho, protocol, 2, tols)
    problem, relative = lhs_lp.problem_for(
        set1, set2, tol=tols.phase, prob_floor=tols.prob_floor
    )
    doc = problem.to_json_dict()
    doc["relative"] = relative
    cfg.dump_lp.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_check(cfg: RunConfig) -> int:
    state, protocol = _load_pair(cfg)
    report = certify(state, protocol, lp=cfg.lp, tolerances=cfg.tolerances())
    if cfg.dump_lp is not None:
        _dump_lp(cfg, state, protocol)
    _emit_report(report, cfg.fmt)
    return 0


def _random_protocol(m_qubits: int, seed: int, index: int) -> SteeringProtocol:
    rng = np.random.default_rng([seed, index])
    s1 = random_rank1_setting(m_qubits, rng, label="random-1")
    s2 = random_rank1_setting(m_qubits, rng, label="random-2")
    while settings_equal(s1, s2):
        s2 = random_rank1_setting(m_qubits, rng, label="random-2")
    return SteeringProtocol(alice_qubits=m_qubits, setting_1=s1, setting_2=s2)


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.count < 1:
        raise DimensionError(f"count must be positive, got {cfg.count}")
    fixed = None
    if cfg.protocol_path is not None:
        fixed = load_protocol(cfg.protocol_path.read_text())
        if fixed.alice_qubits != cfg.alice_qubits:
            raise DimensionError(
                f"protocol measures {fixed.alice_qubits} qubits, sweep says {cfg.alice_qubits}"
            )
    if cfg.alice_qubits >= cfg.n_qubits:
        raise DimensionError(
            f"alice_qubits={cfg.alice_qubits} leaves Bob empty for n={cfg.n_qubits}"
        )
    tols = cfg.tolerances()
    counts = {PARADOX: 0, NO_PARADOX_PURITY: 0, NO_PARADOX_CROSS_DUPLICATE: 0}
    samples = []
    for i in range(cfg.count):
        # per-sample determinism: the state takes seed+i, the protocol a
        # stream keyed on (seed, i) so the two never share draws
        state = random_mixed(cfg.n_qubits, cfg.rank, cfg.seed + i)
        protocol = fixed or _random_protocol(cfg.alice_qubits, cfg.seed, i)
        report = certify(state, protocol, tolerances=tols)
        counts[report.verdict] = counts.get(report.verdict, 0) + 1
        samples.append({"index": i, "seed": cfg.seed + i, "verdict": report.verdict})
    if cfg.fmt == "json":
        _emit_json(
            {
                "command": "sweep",
                "n_qubits": cfg.n_qubits,
                "alice_qubits": cfg.alice_qubits,
                "rank": cfg.rank,
                "count": cfg.count,
                "seed": cfg.seed,
                "protocol": "fixed" if fixed is not None else "random",
                "verdict_counts": counts,
                "samples": samples,
            }
        )
    else:
        print(
            f"sweep: n={cfg.n_qubits} alice={cfg.alice_qubits} rank={cfg.rank} "
            f"count={cfg.count} seed={cfg.seed} "
            f"protocol={'fixed' if fixed is not None else 'random'}"
        )
        for verdict in sorted(counts):
            print(f"  {verdict:<28} {counts[verdict]}")
    return 0


def cmd_lhs(cfg: RunConfig) -> int:
    state, protocol = _load_pair(cfg)
    tols = cfg.tolerances()
    rho = density_of(state) if isinstance(state, EnsembleState) else state
    set1 = conditional_states(rho, protocol, 1, tols)
    set2 = conditional_states(rho, protocol, 2, tols)
    problem, relative = lhs_lp.problem_for(
        set1, set2, tol=tols.phase, prob_floor=tols.prob_floor
    )
    if cfg.dump_lp is not None:
        doc = problem.to_json_dict()
        doc["relative"] = relative
        cfg.dump_lp.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    result = lhs_lp.solve_feasibility(problem, tol=tols.lp_feasibility)
    residual = None
    if result.feasible:
        residual = lhs_lp.verify_model(result.model, set1, set2)
        verdict = "feasible"
    else:
        verdict = "infeasible-relative-to-candidates" if relative else "infeasible"
    if cfg.fmt == "json":
        model_doc = None
        if result.feasible:
            model_doc = {
                "weights": list(result.model.member_weights),
                "responses": [
                    [[float(v) for v in row] for row in table]
                    for table in result.model.responses
                ],
            }
        _emit_json(
            {
                "command": "lhs",
                "lp_verdict": verdict,
                "phase1_optimum": result.phase1_optimum,
                "iterations": result.iterations,
                "relative": relative,
                "verify_residual": residual,
                "n_members": problem.n_members,
                "n_variables": problem.n_variables,
                "model": model_doc,
            }
        )
    else:
        print(f"lhs-lp: {verdict} (phase-1 optimum {result.phase1_optimum:.6e})")
        print(f"members: {problem.n_members}  variables: {problem.n_variables}  "
              f"iterations: {result.iterations}")
        if result.feasible:
            for i, w in enumerate(result.model.member_weights):
                print(f"  member {i}: weight {w:.6f}")
            print(f"verify residual: {residual:.6e}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    handlers = {"demo": cmd_demo, "check": cmd_check, "sweep": cmd_sweep, "lhs": cmd_lhs}
    try:
        return handlers[cfg.command](cfg)
    except SolverLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SteerlabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
