# coding: utf-8

import csv
import sys
import argparse
from pathlib import Path
from typing import List, Tuple, Any, Optional

from .charsum import AsymptoticParams, spectrum, spectrum_identity_check, spectrum_rows, effective_threshold, spectral_bound
from .config import CommandArgsConfig, new_yml_config
from .constants import (
    PACKAGE_NAME, ExitCode, DEFAULT_WITNESS_BASENAME, DEFAULT_CATALOG_BASENAME,
)
from .errors import (
    Error, ArgumentError, TheoremViolation, BadLength, HasFullLengthZeroSum, HasShortZeroSum, NotSquarefree,
    NotFound, GenerationFailed, BudgetExceeded,
)
from .group import GroupSpec, Basis, make_basis, standard_basis
from .lemmas import (
    LemmaReport, check_lemma_3_1, check_lemma_3_2, check_lemma_3_3, check_lemma_3_4,
    find_n_or_2n_zero_sum, find_gao_translate, verify_certificate,
)
from .program import CommandProgram, CommandOutcome, read_run_record
from .search import SearchConfig, max_zero_sumfree_length, verify_property_b, random_zero_sumfree, spot_check_pruned
from .sequence import Sequence, read_sequence_file, write_sequence_file
from .subsum import find_zero_sum
from .theorem import analyze_theorem_1_1, reduce_theorem_1_2, reduce_theorem_1_3, Verdict, VerdictKind

import logging
logger = logging.getLogger(__name__)


PROG = f"python -m {PACKAGE_NAME}"
LEMMAS = ("3.1", "3.2", "3.3", "3.4", "3.5", "3.6")
THEOREMS = ("1.1", "1.2", "1.3")

# a failing hypothesis is an answer, not an input error
HYPOTHESIS_ERRORS = (BadLength, HasFullLengthZeroSum, HasShortZeroSum, NotSquarefree)


def constraint_label(constraint: str, p: int, length: int = None) -> str:
    match constraint:
        case "exact_length":
            return f"exact_length({length})"
        case "short":
            return f"short(<={p})"
        case _:
            return "any"


def parse_basis(spec: GroupSpec, text: Optional[str]) -> Basis:
    """
    ``"1,0:0,1"``: basis vectors separated by colons, coordinates by commas.
    """
    if not text:
        return standard_basis(spec)
    try:
        vectors = [tuple(int(c) for c in part.split(",")) for part in text.split(":")]
    except ValueError as err:
        raise ArgumentError(f"invalid basis {text!r}: {err}") from err
    return make_basis(spec, vectors)


def _write_witness(program: CommandProgram, witness: Sequence, source: str, explicit: str = None):
    path = program.artifact(DEFAULT_WITNESS_BASENAME, explicit)
    if path:
        write_sequence_file(witness, path, comment=f"zero-sum witness from {source}")
        logger.info("witness written: %s", path)


def cmd_analyze(program: CommandProgram, args) -> CommandOutcome:
    seq = read_sequence_file(args.file)
    stats = seq.stats()
    label = constraint_label(args.constraint, seq.spec.p, args.length)
    witness = find_zero_sum(seq, args.constraint, args.length)
    free_key = "zero-sumfree" if args.constraint == "any" else f"free of {label}"

    fields = [
        ("file", args.file),
        ("group", f"C_{seq.spec.p}^{seq.spec.r}"),
        ("length", stats.length),
        ("h", stats.h),
        ("supp_size", stats.supp_size),
        ("sigma", stats.sigma),
        ("v0", stats.v0),
        ("constraint", label),
        (free_key, witness is None),
        ("witness", witness.witness if witness else None),
        ("witness_length", witness.length if witness else None),
    ]
    if witness:
        _write_witness(program, witness.witness, args.file, args.witness_out)
    return CommandOutcome(
        exit_code=ExitCode.OK if witness is None else ExitCode.NEGATIVE,
        fields=fields,
        summary={**stats.model_dump(), "constraint": label, "zero_sumfree": witness is None,
                 "witness": str(witness.witness) if witness else None},
    )


def _certificate_fields(report: LemmaReport) -> List[Tuple[str, Any]]:
    fields = []
    for key, value in report.certificate.items():
        if isinstance(value, dict):
            fields.append((f"certificate.{key}", sorted(value)))
        else:
            fields.append((f"certificate.{key}", value))
    return fields


def _lemma_report(seq: Sequence, args) -> LemmaReport:
    match args.name:
        case "3.1":
            return check_lemma_3_1(seq)
        case "3.2":
            return check_lemma_3_2(seq, args.k, args.part)
        case "3.3":
            return check_lemma_3_3(seq, parse_basis(seq.spec, args.basis))
        case "3.4":
            if args.eps is None or args.c is None:
                raise ArgumentError("lemma 3.4 needs --eps and --c")
            return check_lemma_3_4(seq, AsymptoticParams(epsilon=args.eps, c=args.c, r=max(2, seq.spec.r)))
        case "3.5":
            return find_n_or_2n_zero_sum(seq)
        case "3.6":
            return find_gao_translate(seq, args.k)
        case _:
            raise ArgumentError(f"unknown lemma: {args.name}")


def cmd_lemma(program: CommandProgram, args) -> CommandOutcome:
    seq = read_sequence_file(args.file)
    try:
        report = _lemma_report(seq, args)
    except HYPOTHESIS_ERRORS as err:
        return CommandOutcome(
            exit_code=ExitCode.NEGATIVE,
            fields=[("lemma", args.name), ("hypothesis", False), ("detail", str(err))],
            summary={"lemma": args.name, "hypothesis_ok": False, "detail": str(err)},
        )

    verified = verify_certificate(report, seq) if report.hypothesis_ok and report.claim_holds else None
    if verified is False:
        raise TheoremViolation(f"lemma {report.lemma}", "certificate does not re-verify", report)
    fields = [
        ("lemma", report.lemma),
        ("hypothesis", report.hypothesis_ok),
        ("claim", report.claim_holds),
        ("lhs", report.lhs),
        ("rhs", report.rhs),
        ("detail", report.detail),
        ("certificate-verified", verified),
    ] + _certificate_fields(report)
    holds = report.hypothesis_ok and report.claim_holds
    return CommandOutcome(
        exit_code=ExitCode.OK if holds else ExitCode.NEGATIVE,
        fields=fields,
        summary={"lemma": report.lemma, "hypothesis_ok": report.hypothesis_ok, "claim_holds": report.claim_holds,
                 "lhs": report.lhs, "rhs": report.rhs},
    )


def _csv_value(value: Any) -> str:
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case float():
            return repr(value)
        case _:
            return str(value)


def write_spectrum_csv(rows: List[dict], path: Path) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _csv_value(value) for key, value in row.items()})
    return path


def cmd_charsum(program: CommandProgram, args) -> CommandOutcome:
    seq = read_sequence_file(args.file)
    identity = spectrum_identity_check(seq)
    if not identity.holds:
        raise TheoremViolation("orthogonality", f"relative error {identity.relative_error} >= 1e-9", identity)

    params = None
    if args.eps is not None and args.c is not None:
        params = AsymptoticParams(epsilon=args.eps, c=args.c, r=max(2, seq.spec.r))
    rows = spectrum_rows(spectrum(seq), params, seq)
    envelope_rows = [row for row in rows if row["envelope"] is not None]
    failures = [row for row in envelope_rows if not row["holds"]]

    csv_path = program.artifact("spectrum.csv", args.csv)
    if csv_path:
        write_spectrum_csv(rows, csv_path)

    fields = [
        ("file", args.file),
        ("s", identity.s),
        ("order", identity.order),
        ("sum_over_chi", identity.sum_over_chi),
        ("sum_imag", identity.sum_imag),
        ("zero_sum_count", identity.zero_sum_count),
        ("order_times_count", identity.expected),
        ("relative_error", identity.relative_error),
        ("identity", identity.holds),
        ("rows", len(rows)),
        ("envelope_rows", len(envelope_rows)),
        ("envelope_failures", len(failures)),
        ("csv", csv_path),
    ]
    if params:
        M = params.M(seq.spec.p)
        fields.append(("M", M))
        if M >= 1:
            bound = spectral_bound(seq.spec.p, seq.spec.r, len(seq), M)
            fields.extend([("spectral_lower", bound.lower), ("spectral_rules_out", bound.rules_out)])
    if failures:
        raise TheoremViolation("envelope", f"{len(failures)} characters exceed the envelope", failures)
    return CommandOutcome(fields=fields, summary=identity.model_dump())


def cmd_threshold(program: CommandProgram, args) -> CommandOutcome:
    params = AsymptoticParams(epsilon=args.eps, c=args.c, r=args.r)
    try:
        report = effective_threshold(params, args.cap)
    except NotFound as err:
        return CommandOutcome(exit_code=ExitCode.NEGATIVE,
                              fields=[("epsilon", args.eps), ("c", args.c), ("r", args.r), ("p_threshold", None),
                                      ("detail", str(err))],
                              summary={"p_threshold": None})
    return CommandOutcome(fields=list(report.model_dump().items()), summary=report.model_dump())


def _verdict_fields(verdict: Verdict, prefix: str = "") -> List[Tuple[str, Any]]:
    return [
        (f"{prefix}verdict", verdict.kind),
        (f"{prefix}case", verdict.case),
        (f"{prefix}h", verdict.h),
        (f"{prefix}bound", verdict.bound),
        (f"{prefix}length", verdict.length),
        (f"{prefix}length_bound", verdict.length_bound),
        (f"{prefix}c_eff", verdict.c_eff),
        (f"{prefix}witness", verdict.witness.witness if verdict.witness else None),
        (f"{prefix}basis", verdict.basis.vectors if verdict.basis else None),
        (f"{prefix}attempts", verdict.attempts),
    ]


def _steps(checks) -> List[str]:
    return [f"{step.name}={step.status.name}" for step in checks.steps]


def cmd_theorem(program: CommandProgram, args) -> CommandOutcome:
    seq = read_sequence_file(args.file)
    fields: List[Tuple[str, Any]] = [("theorem", args.which), ("file", args.file),
                                     ("epsilon", args.eps), ("c", args.c)]
    try:
        match args.which:
            case "1.1":
                verdict = analyze_theorem_1_1(seq, args.eps, args.c, args.bound)
                fields.extend(_verdict_fields(verdict))
                if verdict.witness:
                    _write_witness(program, verdict.witness.witness, args.file, args.witness_out)
                code = ExitCode.OK if verdict.kind == VerdictKind.CONCLUSION_HOLDS else ExitCode.NEGATIVE
                return CommandOutcome(exit_code=code, fields=fields,
                                      summary={"verdict": verdict.kind.value, "case": verdict.case})
            case "1.2":
                report = reduce_theorem_1_2(seq, args.eps, args.c, args.bound)
                fields.extend([("k", report.k), ("T", report.T), ("T1", report.T1), ("g", report.g),
                               ("R", report.R), ("steps", _steps(report.checks))])
            case _:
                report = reduce_theorem_1_3(seq, args.eps, args.c, args.bound)
                fields.extend([("k", report.k), ("g", report.g), ("T", report.T), ("translated", report.translated),
                               ("h_S", report.h_S), ("h_T", report.h_T), ("steps", _steps(report.checks))])
    except HYPOTHESIS_ERRORS as err:
        fields.extend([("hypothesis", False), ("detail", str(err))])
        return CommandOutcome(exit_code=ExitCode.NEGATIVE, fields=fields,
                              summary={"hypothesis_ok": False, "detail": str(err)})

    fields.extend(_verdict_fields(report.verdict, "theorem_1_1."))
    return CommandOutcome(fields=fields, summary={"steps": _steps(report.checks),
                                                  "verdict": report.verdict.kind.value})


def _catalog_fields(catalog) -> List[Tuple[str, Any]]:
    return [
        ("max_length", catalog.max_length),
        ("count", catalog.count),
        ("min_h", catalog.min_h),
        ("h_histogram", catalog.h_histogram),
        ("exhaustive", catalog.exhaustive),
        ("canonical_exact", catalog.canonical_exact),
        ("nodes", catalog.nodes),
    ]


def cmd_search(program: CommandProgram, args) -> CommandOutcome:
    config = SearchConfig(
        p=args.p, target_length=args.target_length, mode=args.mode, samples=args.samples, seed=program.seed,
        symmetry=not args.no_symmetry, time_budget=args.time_budget, allow_large=args.allow_large,
        threads=args.threads,
    )
    fields: List[Tuple[str, Any]] = [("p", args.p), ("mode", args.mode), ("symmetry", config.symmetry)]
    code = ExitCode.OK
    try:
        if args.property_b:
            report = verify_property_b(args.p, config)
            catalog = report.catalog
            fields.extend([("property_b", report.holds), ("bound", report.bound),
                           ("minimal_form", report.minimal_form_holds)])
        else:
            catalog = max_zero_sumfree_length(args.p, config)
    except BudgetExceeded as err:
        catalog = err.partial
        code = ExitCode.ERROR
        fields.append(("detail", str(err)))

    fields.extend(_catalog_fields(catalog))
    if catalog.pruned:
        fields.append(("pruned_checked", spot_check_pruned(catalog)))
    path = program.artifact(DEFAULT_CATALOG_BASENAME, args.catalog)
    if path and catalog.entries:
        path.write_text(catalog.serialize(), encoding="utf-8")
    return CommandOutcome(exit_code=code, fields=fields, summary=catalog.summary())


def cmd_random(program: CommandProgram, args) -> CommandOutcome:
    fields: List[Tuple[str, Any]] = [("p", args.p), ("length", args.length)]
    try:
        seq = random_zero_sumfree(args.p, args.length, program.seed, args.attempts)
    except GenerationFailed as err:
        fields.append(("detail", str(err)))
        return CommandOutcome(exit_code=ExitCode.NEGATIVE, fields=fields, summary={"generated": False})

    path = program.artifact("random.seq", args.out)
    if path:
        write_sequence_file(seq, path, comment=f"random zero-sumfree, seed {program.seed}")
    fields.extend([("sequence", seq), ("h", seq.h), ("zero-sumfree", True)])
    return CommandOutcome(fields=fields, summary={"generated": True, "sequence": str(seq)})


COMMANDS = {
    "analyze": cmd_analyze,
    "lemma": cmd_lemma,
    "charsum": cmd_charsum,
    "threshold": cmd_threshold,
    "theorem": cmd_theorem,
    "search": cmd_search,
    "random": cmd_random,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', default=False, help='print the report as json')
    common.add_argument('--seed', type=int, default=0, help='random seed, default: 0')
    common.add_argument('--threads', type=int, help='worker processes for sweeps and searches')
    common.add_argument('--mem-cap', help='byte cap for subsum tables, e.g. 512M')
    common.add_argument('--output-dir', help='output dir which used to store logs, artifacts and run record')
    common.add_argument('--log-level', help='log level, check logging package for detail, default: INFO')
    common.add_argument('--config', help='settings file with ext: .yml, .yaml')

    parser = argparse.ArgumentParser(prog=PROG, add_help=True)
    sub_parsers = parser.add_subparsers(dest="func")

    analyze = sub_parsers.add_parser("analyze", parents=[common], help=f'stats and zero-sum search, detail: {PROG} analyze -h')
    analyze.add_argument('file', help='sequence file')
    analyze.add_argument('--constraint', choices=("any", "exact_length", "short"), default="any",
                         help='any, exact_length (with --length) or short (length <= p)')
    analyze.add_argument('--length', type=int, help='length for exact_length')
    analyze.add_argument('--witness-out', help='where to write the witness')

    lemma = sub_parsers.add_parser("lemma", parents=[common], help=f'check a lemma instance, detail: {PROG} lemma -h')
    lemma.add_argument('name', choices=LEMMAS)
    lemma.add_argument('file', help='sequence file')
    lemma.add_argument('--k', type=int, help='k for 3.2 and 3.6')
    lemma.add_argument('--part', type=int, choices=(1, 2, 3), default=1, help='part of 3.2, default: 1')
    lemma.add_argument('--basis', help='basis for 3.3, e.g. "1,0:0,1"')
    lemma.add_argument('--eps', type=float, help='epsilon for 3.4')
    lemma.add_argument('--c', type=float, help='c for 3.4')

    charsum = sub_parsers.add_parser("charsum", parents=[common], help=f'character sum spectrum, detail: {PROG} charsum -h')
    charsum.add_argument('file', help='sequence file')
    charsum.add_argument('--csv', help='spectrum csv output')
    charsum.add_argument('--eps', type=float, help='epsilon for the envelope columns')
    charsum.add_argument('--c', type=float, help='c for the envelope columns')

    threshold = sub_parsers.add_parser("threshold", parents=[common], help=f'effective prime threshold, detail: {PROG} threshold -h')
    threshold.add_argument('--eps', type=float, required=True)
    threshold.add_argument('--c', type=float, required=True)
    threshold.add_argument('--r', type=int, default=2)
    threshold.add_argument('--cap', type=int, help='scan cap, default from settings')

    theorem = sub_parsers.add_parser("theorem", parents=[common], help=f'theorem engine, detail: {PROG} theorem -h')
    theorem.add_argument('which', choices=THEOREMS)
    theorem.add_argument('file', help='sequence file')
    theorem.add_argument('--eps', type=float, required=True)
    theorem.add_argument('--c', type=float, required=True)
    theorem.add_argument('--bound', type=int, help='replace ⌊p^(1/4−eps)⌋ by this bound')
    theorem.add_argument('--witness-out', help='where to write the witness')

    search = sub_parsers.add_parser("search", parents=[common], help=f'extremal search, detail: {PROG} search -h')
    search.add_argument('--p', type=int, required=True)
    search.add_argument('--mode', choices=("exhaustive", "randomized"), default="exhaustive")
    search.add_argument('--samples', type=int, default=100, help='randomized samples, default: 100')
    search.add_argument('--target-length', type=int)
    search.add_argument('--no-symmetry', action='store_true', default=False)
    search.add_argument('--time-budget', type=float, help='seconds')
    search.add_argument('--allow-large', action='store_true', default=False, help='allow exhaustive mode for p > 5')
    search.add_argument('--property-b', action='store_true', default=False, help='verify property B on the catalog')
    search.add_argument('--catalog', help='catalog output')

    random_ = sub_parsers.add_parser("random", parents=[common], help=f'random zero-sumfree sequence, detail: {PROG} random -h')
    random_.add_argument('--p', type=int, required=True)
    random_.add_argument('--length', type=int, required=True)
    random_.add_argument('--attempts', type=int)
    random_.add_argument('--out', help='sequence file output')

    replay = sub_parsers.add_parser("replay", help=f're-run a recorded command, detail: {PROG} replay -h')
    replay.add_argument('record', help='run_record.json')
    return parser


def main(argv: List[str] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.func is None:
        parser.print_help()
        return ExitCode.ERROR.value
    if args.func == "replay":
        try:
            record = read_run_record(args.record)
        except (Error, OSError) as err:
            print(f"replay: error: {err}", file=sys.stderr)
            return ExitCode.ERROR.value
        if record.arguments[:1] == ["replay"]:
            print("replay: error: a run record never holds a replay", file=sys.stderr)
            return ExitCode.ERROR.value
        print(f"replay: {PROG} {' '.join(record.arguments)}", file=sys.stderr)
        return main(record.arguments)

    try:
        fallback = new_yml_config(args.config) if args.config else None
        config = CommandArgsConfig(log_level=args.log_level, threads=args.threads, mem_cap=args.mem_cap,
                                   fallback=fallback)
    except Error as err:
        print(f"{args.func}: error: {err}", file=sys.stderr)
        return ExitCode.ERROR.value

    program = CommandProgram(args.func, argv, config, args.output_dir, args.seed, "json" if args.json else None)
    record = program.run(lambda prog: COMMANDS[args.func](prog, args))
    return record.exit_code
