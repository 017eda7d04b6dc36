import argparse
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import gtci
from gtci.constellations import enumerate_constellations, is_fano
from gtci.exceptions import GTCIError, exit_code
from gtci.geometry import (
    anticanonical_class,
    anticanonical_selfintersection,
    count_lattice_points,
    downgrade_geometry,
    generator_matrix,
    h0_anticanonical,
)
from gtci.logger import set_verbosity
from gtci.output import FORMATS, default_path, render, write_output
from gtci.pipeline import ALL_TYPES, EXPECTED_TOTALS, classify, run_fixtures, verify_classification
from gtci.torsion import DegreeMatrix, downgrade_matrix, is_almost_free, is_gorenstein_matrix

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass
class CliConfig:
    command: str
    d: int = 3
    c_set: Tuple[int, ...] = ALL_TYPES
    fmt: str = "json"
    cutoff: Optional[int] = None
    output: Optional[str] = None
    verbose: bool = False
    quiet: bool = False
    workers: Optional[int] = None
    extra: dict = field(default_factory=dict)


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got '{text}'")


def _type_pair(text: str) -> Tuple[int, int]:
    values = _int_list(text)
    if len(values) != 2 or values[0] != 3 or values[1] not in ALL_TYPES:
        raise argparse.ArgumentTypeError(f"type must be one of 3,1 3,2 3,3, got '{text}'")
    return values[0], values[1]


def _cutoff(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cutoff must be an integer, got '{text}'")
    if value < gtci.MIN_TAIL_CUTOFF:
        raise argparse.ArgumentTypeError(f"cutoff must be at least {gtci.MIN_TAIL_CUTOFF}")
    return value


def _add_matrix_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--w", type=_int_list, required=True, help="weights, e.g. 1,2,3,6,6")
    parser.add_argument("--deg", type=_int_list, required=True, help="relation degrees, e.g. 12")
    parser.add_argument("--torsion", type=_int_list, default=(), help="invariant factors, largest first")
    parser.add_argument("--eta", type=_int_list, action="append", default=[], help="torsion row, once per factor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtci",
        description="Classification of Q-factorial Gorenstein Fano gtci threefolds of Picard number one",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    parser.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    parser.add_argument("--version", action="version", version=f"gtci {gtci.__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    enumerate_ = commands.add_parser("enumerate", help="list weight-degree constellations")
    enumerate_.add_argument("--type", type=_type_pair, default=(3, 1))
    enumerate_.add_argument("--cutoff", type=_cutoff)

    classify_ = commands.add_parser("classify", help="classify families")
    classify_.add_argument("--type", type=_type_pair, action="append")
    classify_.add_argument("--format", choices=sorted(FORMATS), default="json")
    classify_.add_argument("--output", help=f"output file (default: ${gtci.OUTPUT_DIR_ENV} or stdout)")
    classify_.add_argument("--cutoff", type=_cutoff)
    classify_.add_argument("--workers", type=int)

    invariants = commands.add_parser("invariants", help="invariants of explicit degree data")
    _add_matrix_arguments(invariants)

    downgrade = commands.add_parser("downgrade", help="downgrade explicit degree data")
    _add_matrix_arguments(downgrade)
    downgrade.add_argument("--subgroup", type=_int_list, action="append", default=[], help="subgroup generator")

    verify = commands.add_parser("verify", help="run the fixtures and the property suite")
    verify.add_argument("--type", type=_type_pair, action="append")
    verify.add_argument("--cutoff", type=_cutoff)
    verify.add_argument("--workers", type=int)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> CliConfig:
    args = build_parser().parse_args(argv)
    types = getattr(args, "type", None)
    if isinstance(types, tuple):
        types = [types]
    config = CliConfig(
        command=args.command,
        c_set=tuple(sorted({t[1] for t in types})) if types else ALL_TYPES,
        fmt=getattr(args, "format", "json"),
        cutoff=getattr(args, "cutoff", None),
        output=getattr(args, "output", None),
        verbose=args.verbose,
        quiet=args.quiet,
        workers=getattr(args, "workers", None),
    )
    for name in ("w", "deg", "torsion", "eta", "subgroup"):
        if hasattr(args, name):
            config.extra[name] = getattr(args, name)
    return config


def _print(line: str = ""):
    sys.stdout.write(line + "\n")


def _matrix(config: CliConfig) -> DegreeMatrix:
    extra = config.extra
    return DegreeMatrix.of(extra["w"], extra["deg"], extra["torsion"], extra["eta"])


def cmd_enumerate(config: CliConfig) -> int:
    for c in config.c_set:
        for k in enumerate_constellations(config.d, c, config.cutoff):
            _print(str(k))
    return EXIT_OK


def cmd_classify(config: CliConfig) -> int:
    result = classify(config.c_set, config.cutoff, config.workers)
    text = render(result.records, config.fmt)
    path = config.output or default_path(config.fmt)
    if path:
        write_output(text, path)
        gtci.logger.info(f"Wrote {len(result)} records to {path}")
    else:
        sys.stdout.write(text)
    gtci.logger.info(repr(result.summary))
    return EXIT_OK


def cmd_invariants(config: CliConfig) -> int:
    q = _matrix(config)
    almost_free = is_almost_free(q)
    antican = anticanonical_class(q)
    _print(f"constellation: {q.constellation}")
    _print(f"torsion: {q.gamma}")
    _print(f"almost_free: {str(almost_free).lower()}")
    _print(f"gorenstein: {str(is_gorenstein_matrix(q)).lower()}")
    _print(f"fano: {str(is_fano(q.constellation)).lower()}")
    _print(f"antican_z: {antican.z}")
    _print(f"antican_torsion: {'.'.join(map(str, antican.torsion.coords)) or '0'}")
    _print(f"antican_cube: {anticanonical_selfintersection(q)}")
    if almost_free:
        _print(f"h0: {h0_anticanonical(q, generator_matrix(q))}")
    else:
        gtci.logger.warning("Degree matrix is not almost free; h0 is not computed")
    return EXIT_OK


def cmd_downgrade(config: CliConfig) -> int:
    q = _matrix(config)
    subgroup = [q.gamma.element(g) for g in config.extra["subgroup"]] or list(q.gamma.generators())
    downgraded = downgrade_matrix(q, subgroup)
    geometry = downgrade_geometry(q, subgroup)
    _print(f"downgraded: {downgraded}")
    _print("P~: " + "; ".join(" ".join(map(str, row)) for row in geometry.p.p.rows))
    _print("A: " + "; ".join(" ".join(map(str, row)) for row in geometry.a.rows))
    _print("lattice_points: " + " ".join(str(count_lattice_points(s)) for s in geometry.polytopes))
    return EXIT_OK


def cmd_verify(config: CliConfig) -> int:
    report = run_fixtures()
    result = classify(config.c_set, config.cutoff, config.workers)
    failures = [f"fixture {r.name}" for r in report.failures]
    failures += verify_classification(result, {c: EXPECTED_TOTALS[c] for c in config.c_set})
    if failures:
        gtci.logger.error(f"{len(failures)} checks failed")
        return EXIT_FAILED
    gtci.logger.info(f"All checks passed: {repr(report)}, {repr(result.summary)}")
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "invariants": cmd_invariants,
    "downgrade": cmd_downgrade,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    set_verbosity(config.verbose, config.quiet)
    try:
        return COMMANDS[config.command](config)
    except GTCIError as e:
        gtci.logger.error(str(e))
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
