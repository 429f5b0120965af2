#!/usr/bin/env python
import argparse
import sys

from dataclasses import dataclass

from qtilt.config import config, cache_directory
from qtilt.enums import OutputFormats, ExitCodes
from qtilt.loggers import build_logger
from qtilt.utilities import QTiltError

from qtilt.lattice import Params, LatticeError, special_labels, length_label
from qtilt.charring import (
    CharacterError, NotATiltingCharacterError, dimension, simple_character, tilting_character,
    twisted_tilting_character, weyl_character
)
from qtilt.fusion import FusionError, decompose_report
from qtilt.presentation import (
    PresentationError, radical_evidence, rank_report, surjectivity_probe, verify_identities, verify_kernel
)
from qtilt.serialization import dumps, character_to_json, label_to_json, parse_label, parse_weight, weight_to_json
from qtilt.structure_constants import StructureConstantTable, StructureConstantTableError


VERSION = "2026.4.0"

valid_commands = [
    "decompose",
    "character",
    "relations",
    "reduced",
    "identities",
    "table",
    "surjectivity",
    "basis"
]


@dataclass
class RunConfig:
    params: Params
    command: str
    arguments: argparse.Namespace
    output_format: OutputFormats
    cache_directory: str
    seed: int
    verify: bool


def execute():
    if len(sys.argv) == 1:
        executable_help()
    elif sys.argv[1] == "-h" or sys.argv[1] == "--help":
        executable_help()
    else:
        sys.exit(run(sys.argv[1], sys.argv[2:]))


def executable_help():
    print(f"\nqtilt v{VERSION}")
    print("Available Commands:\n")

    for command, description in command_description_mapping.items():
        print(f"{command.rjust(16)}: {description}")

    print("")


def run(command, args):
    if command not in valid_commands:
        print(f"'{command}' is not a valid qtilt command.", file=sys.stderr)
        return ExitCodes.MALFORMED_INPUT.value

    try:
        run_config = build_run_config(command, args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ExitCodes.MALFORMED_INPUT.value
    except QTiltError as e:
        print(f"Error: {e}", file=sys.stderr)
        return ExitCodes.MALFORMED_INPUT.value

    logger = build_logger(config["logger"]["backend"], dict(config["logger"]))

    try:
        return command_function_mapping[command](run_config, logger)
    except StructureConstantTableError as e:
        print(f"Error: {e}", file=sys.stderr)
        return ExitCodes.UNWRITABLE_CACHE.value
    except NotATiltingCharacterError as e:
        print(f"Internal inconsistency: {e}", file=sys.stderr)
        return ExitCodes.CONSERVATION_FAILURE.value
    except (LatticeError, CharacterError, FusionError, PresentationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return ExitCodes.MALFORMED_INPUT.value


def build_parser(command):
    parser = argparse.ArgumentParser(prog=f"qtilt {command}", description=command_description_mapping[command])

    parser.add_argument("--l", type=int, default=config["params"]["l"], help="order of the root of unity")
    parser.add_argument("--p", type=int, default=config["params"]["p"], help="characteristic (prime)")
    parser.add_argument("--n", type=int, default=0, help="number of classical levels")
    parser.add_argument("--max", type=int, default=None, help="length bound")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--cache", default=None, help="cache directory (QTILT_CACHE wins)")
    parser.add_argument("--seed", type=int, default=config["probes"]["seed"])
    parser.add_argument("--no-verify", action="store_true")

    if command == "decompose":
        parser.add_argument("weights", nargs=2, metavar="a,b")
    elif command == "character":
        parser.add_argument("kind", choices=["simple", "weyl", "tilting", "label"])
        parser.add_argument("value", metavar="a,b | a,b;a0,b0;...")

    return parser


def build_run_config(command, args):
    arguments = build_parser(command).parse_args(args)

    return RunConfig(
        params=Params(arguments.l, arguments.p),
        command=command,
        arguments=arguments,
        output_format=OutputFormats[arguments.format.upper()],
        cache_directory=cache_directory(arguments.cache),
        seed=arguments.seed,
        verify=not arguments.no_verify
    )


def emit(run_config, report, lines):
    if run_config.output_format == OutputFormats.JSON:
        print(dumps(report))
    else:
        for line in lines:
            print(line)


def _label_string(label_json):
    return ";".join(f"{a},{b}" for a, b in [label_json["qlevel"]] + label_json["levels"])


def decompose(run_config, logger):
    params = run_config.params
    w, w2 = [parse_weight(text) for text in run_config.arguments.weights]

    report = decompose_report(w, w2, params, verify=run_config.verify)

    lines = [f"L({w}) x L({w2}) at l={params.ell}, p={params.p}"]

    for summand in report["summands"]:
        flags = [flag for flag in ("tilting", "simple") if summand[flag]]
        lines.append(f"  t({_label_string(summand['label'])}) x{summand['mult']}  dim {summand['dimension']}  {' '.join(flags)}".rstrip())

    lines.append(f"dimension: {report['dimension']}")

    if report["conservation"] is not None:
        lines.append(f"conservation: {'ok' if report['conservation'] else 'FAILED'}")
        logger.log_event("CONSERVATION_CHECK", {"inputs": report["inputs"], "pass": report["conservation"]})

    emit(run_config, report, lines)

    if report["conservation"] is False:
        print("Failed checks: conservation", file=sys.stderr)
        return ExitCodes.CONSERVATION_FAILURE.value

    return ExitCodes.OK.value


def character(run_config, logger):
    params = run_config.params
    kind = run_config.arguments.kind
    value = run_config.arguments.value

    if kind == "label":
        label = parse_label(value)
        result = twisted_tilting_character(label, params)
        source = label_to_json(label)
    else:
        weight = parse_weight(value)
        source = weight_to_json(weight)

        if kind == "weyl":
            result = weyl_character(weight)
        elif kind == "tilting":
            result = tilting_character(weight, params.ell, params.p)
        else:
            result = simple_character(weight, params)

    report = {
        "kind": kind,
        "input": source,
        "params": params.to_json(),
        "character": character_to_json(result),
        "dimension": dimension(result)
    }

    emit(run_config, report, [f"character: {result}", f"dimension: {dimension(result)}"])

    return ExitCodes.OK.value


def _check_lines(report):
    lines = list()

    for check in report["checks"]:
        lines.append(f"  {check['name']}: {'pass' if check['pass'] else 'FAIL'}")

    return lines


def _finish_checks(run_config, report, heading):
    lines = [heading] + _check_lines(report)

    failing = [check["name"] for check in report.get("checks", []) if not check["pass"]]

    if failing:
        lines.append(f"failed: {', '.join(failing)}")
        print(f"Failed checks: {', '.join(failing)}", file=sys.stderr)

    emit(run_config, report, lines)

    return ExitCodes.OK.value if report["ok"] else ExitCodes.CHECK_FAILED.value


def relations(run_config, logger):
    params = run_config.params
    report = verify_kernel(params.ell, params.p, run_config.arguments.n, logger=logger)

    literal = report["literal_determinant_relation"]
    heading = f"kernel relations at l={params.ell}, p={params.p}, n={run_config.arguments.n}: {'pass' if report['ok'] else 'FAIL'}"

    code = _finish_checks(run_config, report, heading)

    if run_config.output_format == OutputFormats.TEXT and run_config.arguments.n >= 0:
        print(f"  literal {literal['polynomial']}: {'vanishes' if literal['vanishes'] else 'does not vanish'}")

    return code


def reduced(run_config, logger):
    params = run_config.params
    report = radical_evidence(params.ell, params.p, run_config.arguments.n, seed=run_config.seed)

    report["checks"] = [{"name": "radical", "pass": bool(report["radical"])}]
    report["ok"] = bool(report["radical"])

    return _finish_checks(run_config, report, f"radical: {str(report['radical']).lower()} ({report['method']})")


def identities(run_config, logger):
    params = run_config.params
    report = verify_identities(params.ell, params.p, logger=logger)

    return _finish_checks(run_config, report, f"{report['passed']}/{report['total']} identities pass")


def table(run_config, logger):
    max_length = run_config.arguments.max or 0

    structure_constant_table = StructureConstantTable(run_config.params, run_config.cache_directory, logger=logger)
    summary = structure_constant_table.generate(max_length)

    emit(run_config, summary, [
        f"table: {summary['file_path']}",
        f"records: {summary['records']} (computed {summary['computed']}, reused {summary['reused']}, corrupted {summary['corrupted']})"
    ])

    return ExitCodes.OK.value


def surjectivity(run_config, logger):
    params = run_config.params
    n = run_config.arguments.n
    bound = run_config.arguments.max if run_config.arguments.max is not None else 2 * params.ell + params.ell * params.p

    report = surjectivity_probe(params.ell, params.p, n, bound, logger=logger)

    lines = [
        f"targets: {report['targets']}, reached: {len(report['reached'])}, shifted: {len(report['shifted'])}, "
        f"integral: {str(report['integral']).lower()}"
    ] + [f"  unreached: t({_label_string(entry['label'])})" for entry in report["unreached"]]

    emit(run_config, report, lines)

    return ExitCodes.OK.value if report["ok"] else ExitCodes.CHECK_FAILED.value


def basis(run_config, logger):
    params = run_config.params
    n = run_config.arguments.n
    bound = run_config.arguments.max if run_config.arguments.max is not None else 2 * params.ell

    labels = special_labels(params, bound, max_height=n)

    report = {
        "params": params.to_json(),
        "n": n,
        "max_length": bound,
        "labels": [{"label": label_to_json(label), "length": length_label(label, params)} for label in labels],
        "rank": rank_report(params.ell, params.p, n)
    }

    lines = [f"t({label}) length {length_label(label, params)}" for label in labels]
    lines.append(
        f"special labels per determinant coset: {report['rank']['special_labels_per_determinant_coset']} "
        f"(stated rank {report['rank']['stated_rank']})"
    )

    emit(run_config, report, lines)

    return ExitCodes.OK.value


command_function_mapping = {
    "decompose": decompose,
    "character": character,
    "relations": relations,
    "reduced": reduced,
    "identities": identities,
    "table": table,
    "surjectivity": surjectivity,
    "basis": basis
}

command_description_mapping = {
    "decompose": "Decompose L(w) x L(w2) into twisted tilting modules",
    "character": "Print a simple, Weyl, tilting or twisted tilting character",
    "relations": "Check that the presentation kernel generators vanish",
    "reduced": "Reducedness evidence for the presented ring",
    "identities": "Check the Chebyshev/Dickson polynomial identities",
    "table": "Generate the structure-constant table into the cache",
    "surjectivity": "Reach every special label from monomials in the generators",
    "basis": "List special labels and the rank count"
}


if __name__ == "__main__":
    execute()
