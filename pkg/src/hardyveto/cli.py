"""Command-line front end.

Subcommands: ``state`` builds the protocol state or a custom qubit Hardy
state, ``verify`` re-checks the zero conditions and entanglement of such a
state, ``bound`` prints the classical and no-signaling ceilings as exact
fractions, ``simulate`` runs the veto protocol once, and ``audit`` runs
batches of simulations and the privacy audit.

Every subcommand prints a JSON document to stdout and is deterministic under
``--seed`` (falling back to the HARDY_VETO_SEED environment variable).
``--json PATH`` additionally writes the compact form to a file, ``--csv
PATH`` a tabular rendition.  Exit codes: 0 success, 1 failed verification or
audit, 2 invalid flags, 3 protocol abort (source witness rejected).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import enumerate_lhv_max_q, max_q_nosignaling
from .hardy import (
    DegenerateObservables,
    HardySpec,
    Variant,
    build_hardy_state,
    build_hardy_subspace,
    build_veto_state,
    veto_observables,
    verify_genuine_entanglement,
    verify_hardy_conditions,
)
from .protocol import (
    ProtocolParams,
    RatioMode,
    privacy_audit,
    simulate,
)
from .quantum import ObservablePair, Setting, StateVector, born_probability


def _default_seed() -> int:
    return int(os.environ.get("HARDY_VETO_SEED", "0"))


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", metavar="PATH", help="also write compact JSON here")
    parser.add_argument("--csv", metavar="PATH", help="also write a CSV table here")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--veto", action="store_true", help="the protocol state (needs --n)"
    )
    group.add_argument(
        "--qubits", type=int, metavar="N", help="custom qubit Hardy state (needs --alpha)"
    )
    parser.add_argument("--n", type=int, help="party count for --veto")
    parser.add_argument(
        "--alpha",
        help="comma-separated per-party overlaps <v1|u1> for --qubits",
    )


def _emit(payload: dict, args: argparse.Namespace, rows: list[list] | None) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
            fh.write("\n")
    if args.csv and rows is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            csv.writer(fh).writerows(rows)


def _build_from_flags(
    parser: argparse.ArgumentParser, args: argparse.Namespace
) -> tuple[StateVector, list[ObservablePair], HardySpec, int]:
    """State, observables, spec, and complement dimension from state flags."""
    if args.veto:
        if args.n is None:
            parser.error("--veto requires --n")
        if args.n < 2 or args.n > 12:
            parser.error(f"--n {args.n} outside 2..12")
        spec = HardySpec.qubits(args.n)
        state = build_veto_state(args.n)
        observables = veto_observables(args.n)
        subspace = build_hardy_subspace(spec, observables)
        return state, observables, spec, subspace.dim_complement
    if args.qubits < 2:
        parser.error(f"--qubits {args.qubits} < 2")
    if args.alpha is None:
        parser.error("--qubits requires --alpha")
    try:
        alphas = [float(a) for a in args.alpha.split(",")]
    except ValueError:
        parser.error(f"--alpha {args.alpha!r} is not a comma-separated float list")
    if len(alphas) != args.qubits:
        parser.error(f"{len(alphas)} alphas for {args.qubits} qubits")
    spec = HardySpec.qubits(args.qubits)
    try:
        observables = [ObservablePair.qubit_from_alpha(a) for a in alphas]
        built = build_hardy_state(spec, observables)
    except (DegenerateObservables, ValueError) as err:
        parser.error(str(err))
    return built.state, observables, spec, 1


def cmd_state(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    state, observables, spec, dim_complement = _build_from_flags(parser, args)
    q = born_probability(
        state, observables, [Setting.U] * spec.n, [1] * spec.n
    )
    conditions = verify_hardy_conditions(state, observables, spec)
    entanglement = verify_genuine_entanglement(state)
    payload = {
        "kind": "veto" if args.veto else "qubits",
        "n": spec.n,
        "dims": list(spec.dims),
        "state": state.to_dict(),
        "q": q,
        "dim_complement": dim_complement,
        "conditions": [
            {"label": e.label, "probability": e.probability, "passed": e.passed}
            for e in conditions.entries
        ],
        "entanglement": {
            "genuine": entanglement.genuinely_entangled,
            "cut_ranks": [
                {"cut": list(cut), "rank": rank}
                for cut, rank in entanglement.cut_ranks
            ],
        },
    }
    rows = [["index", "re", "im"]] + [
        [i, amp.real, amp.imag] for i, amp in enumerate(state.amps)
    ]
    _emit(payload, args, rows)
    return 0


def cmd_verify(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    state, observables, spec, _ = _build_from_flags(parser, args)
    report = verify_hardy_conditions(state, observables, spec)
    entanglement = verify_genuine_entanglement(state)
    passed = report.passed and entanglement.genuinely_entangled
    payload = {
        "passed": passed,
        "q": report.q,
        "conditions": [
            {"label": e.label, "probability": e.probability, "passed": e.passed}
            for e in report.entries
        ],
        "genuine_entanglement": entanglement.genuinely_entangled,
        "cut_ranks": [
            {"cut": list(cut), "rank": rank} for cut, rank in entanglement.cut_ranks
        ],
    }
    rows = [["label", "probability", "passed"]] + [
        [e.label, e.probability, e.passed] for e in report.entries
    ]
    _emit(payload, args, rows)
    return 0 if passed else 1


def cmd_bound(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.n < 2:
        parser.error(f"--n {args.n} < 2")
    if args.d < 2:
        parser.error(f"--d {args.d} < 2")
    spec = HardySpec(args.n, (args.d,) * args.n, Variant(args.variant))
    lhv_max, _ = enumerate_lhv_max_q(spec)
    ns_max, _ = max_q_nosignaling(spec)
    quantum_q = None
    if args.d == 2 and spec.variant is Variant.MODIFIED and args.n <= 12:
        state = build_veto_state(args.n)
        quantum_q = born_probability(
            state, veto_observables(args.n), [Setting.U] * args.n, [1] * args.n
        )
    payload = {
        "variant": spec.variant.value,
        "n": spec.n,
        "dims": list(spec.dims),
        "lhv_max": str(lhv_max),
        "ns_max": str(ns_max),
        "quantum_q": quantum_q,
    }
    rows = [
        ["variant", "n", "dims", "lhv_max", "ns_max", "quantum_q"],
        [
            spec.variant.value,
            spec.n,
            "x".join(map(str, spec.dims)),
            str(lhv_max),
            str(ns_max),
            quantum_q,
        ],
    ]
    _emit(payload, args, rows)
    return 0


def _protocol_params(args: argparse.Namespace) -> ProtocolParams:
    return ProtocolParams(
        n=args.n,
        rounds=args.rounds,
        p_test=args.p_test,
        list_length=args.list_length,
        tau_plus=args.tau_plus,
        tau_minus=args.tau_minus,
        noise=args.noise,
        seed=args.seed,
        ratio_mode=RatioMode(args.ratio_mode),
        sift_enabled=not args.no_sift,
    )


def cmd_simulate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    try:
        params = _protocol_params(args)
        transcript = simulate(params, args.votes)
    except ValueError as err:
        parser.error(str(err))
    payload = transcript.to_dict()
    if transcript.witness is not None:
        payload_witness = {
            "passed": transcript.witness.passed,
            "q_estimate": transcript.witness.q_estimate,
            "q_expected": transcript.witness.q_expected,
        }
    else:
        payload_witness = None
    payload = {**payload, "witness": payload_witness, "aborted": transcript.aborted}
    rows = [
        ["common_count", "count_plus", "count_minus", "verdict"],
        [
            transcript.common_count,
            transcript.count_plus,
            transcript.count_minus,
            transcript.verdict.value if transcript.verdict else None,
        ],
    ]
    _emit(payload, args, rows)
    return 3 if transcript.aborted else 0


def cmd_audit(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if not 0 <= args.member < args.n:
        parser.error(f"--member {args.member} outside 0..{args.n - 1}")
    try:
        _protocol_params(args)
    except ValueError as err:
        parser.error(str(err))

    def batch(votes: str, seed0: int):
        transcripts = []
        for i in range(args.runs):
            params = ProtocolParams(
                n=args.n,
                rounds=args.rounds,
                p_test=args.p_test,
                list_length=args.list_length,
                tau_plus=args.tau_plus,
                tau_minus=args.tau_minus,
                noise=args.noise,
                seed=seed0 + i,
                ratio_mode=RatioMode(args.ratio_mode),
                sift_enabled=not args.no_sift,
            )
            try:
                transcript = simulate(params, votes)
            except ValueError as err:
                parser.error(str(err))
            if transcript.aborted:
                print(
                    f"run with seed {params.seed} aborted: source witness failed",
                    file=sys.stderr,
                )
                raise SystemExit(3)
            transcripts.append(transcript)
        return transcripts

    favor_votes = "F" * args.n
    veto_votes = "".join(
        "V" if j == args.member else "F" for j in range(args.n)
    )
    favor = batch(favor_votes, args.seed)
    veto = batch(veto_votes, args.seed + args.runs)
    report = privacy_audit(favor, veto, member=args.member, alpha=args.alpha)
    payload = {
        "member": report.member,
        "runs_favor": report.runs_favor,
        "runs_veto": report.runs_veto,
        "alpha": report.alpha,
        "bonferroni_m": report.bonferroni_m,
        "threshold": report.threshold,
        "lengths_identical": report.lengths_identical,
        "tests": [
            {"name": t.name, "p_value": t.p_value, "gates": t.gates}
            for t in report.tests
        ],
        "passed": report.passed,
    }
    rows = [["name", "p_value", "gates"]] + [
        [t.name, t.p_value, t.gates] for t in report.tests
    ]
    _emit(payload, args, rows)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardy-veto",
        description="Hardy-state construction, nonlocality bounds, and the "
        "anonymous veto protocol",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="build a state and its certificate")
    _add_state_flags(p_state)
    _add_output_flags(p_state)

    p_verify = sub.add_parser("verify", help="re-check conditions and entanglement")
    _add_state_flags(p_verify)
    _add_output_flags(p_verify)

    p_bound = sub.add_parser("bound", help="LHV and no-signaling ceilings")
    p_bound.add_argument("--n", type=int, required=True)
    p_bound.add_argument("--d", type=int, default=2)
    p_bound.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=Variant.MODIFIED.value,
    )
    _add_output_flags(p_bound)

    def add_protocol_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--rounds", type=int, default=1_000_000)
        p.add_argument("--p-test", type=float, default=0.05, dest="p_test")
        p.add_argument("--list-length", type=int, default=None, dest="list_length")
        p.add_argument("--tau-plus", type=int, default=None, dest="tau_plus")
        p.add_argument("--tau-minus", type=int, default=None, dest="tau_minus")
        p.add_argument("--noise", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument(
            "--ratio-mode",
            choices=[m.value for m in RatioMode],
            default=RatioMode.BORN_DERIVED.value,
            dest="ratio_mode",
        )
        p.add_argument("--no-sift", action="store_true", dest="no_sift")

    p_sim = sub.add_parser("simulate", help="one protocol run")
    p_sim.add_argument("--votes", required=True, help='e.g. "FVF"')
    add_protocol_flags(p_sim)
    _add_output_flags(p_sim)

    p_audit = sub.add_parser("audit", help="privacy audit over run batches")
    p_audit.add_argument("--runs", type=int, default=50)
    p_audit.add_argument("--member", type=int, default=0)
    p_audit.add_argument("--alpha", type=float, default=0.01)
    add_protocol_flags(p_audit)
    _add_output_flags(p_audit)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "state": cmd_state,
        "verify": cmd_verify,
        "bound": cmd_bound,
        "simulate": cmd_simulate,
        "audit": cmd_audit,
    }
    return handlers[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())
