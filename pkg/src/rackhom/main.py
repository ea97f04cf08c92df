import argparse
import sys
from typing import Dict, Optional, Tuple

from . import VERSION
from .config import AppConfig, BudgetConfig, ConfigManager
from .errors import BudgetExceededError, ParseError, PreconditionError, RackHomError
from .formats import load_json, parse_builtin, parse_module_source, parse_rack_source, rack_from_dict, require_variance
from .homology import (
    Direction, Theory, build_complex, derivations, ext_group, first_cohomology,
    homology_groups, principal_derivations,
)
from .oracles import (
    oracle_factor_sets, oracle_mod_p_ranks, require_ext_agreement, require_rank_agreement,
    z_independence_report,
)
from .rack import AxiomReport, RackTable, check_axioms
from .report import (
    derivations_payload, ext_payload, homology_payload, info_payload, module_check_payload,
    render_json, render_text, tensor_payload, validate_payload, z_independence_payload,
)
from .rmod import Variance, check_module
from .tensor import collapse, tensor
from .utils import setup_logging, get_logger

try:
    from rich.console import Console
    console = Console()
    err_console = Console(stderr=True)
except ImportError:
    console = None
    err_console = None

logger = get_logger(__name__)

Outcome = Tuple[Dict, int]


def print_output(message, style="bold green", error=False):
    if console:
        if error:
            err_console.print(f"Error: {message}", style="bold red", markup=False, highlight=False)
        else:
            console.print(message, style=style, markup=False, highlight=False, soft_wrap=True)
    else:
        prefix = "Error: " if error else ""
        print(f"{prefix}{message}", file=sys.stderr if error else sys.stdout)


def _check_order(rack: RackTable, budgets: BudgetConfig):
    if rack.order > budgets.max_order:
        raise BudgetExceededError(f"Rack order {rack.order} exceeds the budget of {budgets.max_order}")


def _check_degree(n: int, budgets: BudgetConfig):
    if n < 0:
        raise BudgetExceededError("--max-degree must be non-negative")
    if n > budgets.max_degree:
        raise BudgetExceededError(f"Degree {n} exceeds the budget of {budgets.max_degree}")


def _check_base(rack: RackTable, z: int):
    if not 0 <= z < rack.order:
        raise PreconditionError(f"Base element {z} is not in a rack of order {rack.order}")


def _load(args, budgets: BudgetConfig, variance: Variance):
    rack = parse_rack_source(args.rack)
    _check_order(rack, budgets)
    module = require_variance(parse_module_source(args.module, rack, variance), variance)
    return rack, module


def cmd_validate(args, config: AppConfig) -> Outcome:
    if args.rack.startswith("builtin:"):
        rack = parse_builtin(args.rack[len("builtin:"):])
        return validate_payload(args.rack, AxiomReport(True), rack), 0
    data = load_json(args.rack)
    if not isinstance(data, dict):
        raise ParseError("Rack JSON must be an object")
    if "builtin" in data:
        return validate_payload(args.rack, AxiomReport(True), rack_from_dict(data)), 0
    report = check_axioms(data.get("table", []))
    if not report.ok:
        return validate_payload(args.rack, report), 1
    return validate_payload(args.rack, report, rack_from_dict(data)), 0


def cmd_info(args, config: AppConfig) -> Outcome:
    return info_payload(parse_rack_source(args.rack)), 0


def _homology(args, config: AppConfig, direction: Direction) -> Outcome:
    budgets = config.budgets
    _check_degree(args.max_degree, budgets)
    variance = Variance.RIGHT if direction is Direction.HOMOLOGY else Variance.LEFT
    rack, module = _load(args, budgets, variance)
    # the top reported degree needs the map out of the next chain group
    cx = build_complex(rack, module, args.base, args.max_degree + 1, Theory(args.theory), direction)
    result = homology_groups(cx, workers=args.workers or config.workers)
    oracle = require_rank_agreement(oracle_mod_p_ranks(cx)) if args.oracle else None
    return homology_payload(result, oracle), 0


def cmd_homology(args, config: AppConfig) -> Outcome:
    return _homology(args, config, Direction.HOMOLOGY)


def cmd_cohomology(args, config: AppConfig) -> Outcome:
    return _homology(args, config, Direction.COHOMOLOGY)


def cmd_ext(args, config: AppConfig) -> Outcome:
    rack, module = _load(args, config.budgets, Variance.LEFT)
    group = ext_group(rack, module)
    oracle = None
    if args.oracle:
        oracle = require_ext_agreement(
            group, oracle_factor_sets(rack, module, budget=config.budgets.oracle_candidates)
        )
    return ext_payload(rack, module, group, oracle), 0


def cmd_derivations(args, config: AppConfig) -> Outcome:
    rack, module = _load(args, config.budgets, Variance.LEFT)
    _check_base(rack, args.base)
    payload = derivations_payload(
        rack, module, args.base,
        derivations(rack, module),
        principal_derivations(rack, module, args.base),
        first_cohomology(rack, module, args.base),
    )
    return payload, 0


def cmd_tensor(args, config: AppConfig) -> Outcome:
    rack = parse_rack_source(args.rack)
    _check_order(rack, config.budgets)
    a = require_variance(parse_module_source(args.module_a, rack, Variance.RIGHT), Variance.RIGHT)
    b = require_variance(parse_module_source(args.module_b, rack, Variance.LEFT), Variance.LEFT)
    return tensor_payload(a, b, tensor(a, b)), 0


def cmd_check_module(args, config: AppConfig) -> Outcome:
    rack = parse_rack_source(args.rack)
    _check_order(rack, config.budgets)
    variance = Variance(args.variance)
    module = parse_module_source(args.module, rack, variance)
    report = check_module(module, quandle=True if args.quandle else None)
    result = None
    if args.collapse is not None and report.ok:
        result = collapse(
            require_variance(module, Variance.LEFT), word_length=args.collapse,
            quandle=bool(args.quandle) and rack.is_quandle,
        )
    payload = module_check_payload(module, report, result)
    return payload, 0 if payload["ok"] else 1


def cmd_z_independence(args, config: AppConfig) -> Outcome:
    _check_degree(args.max_degree, config.budgets)
    rack, module = _load(args, config.budgets, Variance.LEFT)
    report = z_independence_report(rack, module, max_degree=args.max_degree)
    return z_independence_payload(rack, module, report), 0


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "homology": cmd_homology,
    "cohomology": cmd_cohomology,
    "ext": cmd_ext,
    "derivations": cmd_derivations,
    "tensor": cmd_tensor,
    "check-module": cmd_check_module,
    "z-independence": cmd_z_independence,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], help="Output format (default from config)")
    common.add_argument("--verbose", action="store_true", help="Log to the terminal as well")
    common.add_argument("--workers", type=int, help="Threads for per-degree homology")
    common.add_argument("--config", help="Path to a config file")

    parser = argparse.ArgumentParser(prog="rackhom", description="Rack and quandle (co)homology with module coefficients")
    parser.add_argument("--version", action="version", version=f"rackhom v{VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, module=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("rack", help="builtin:<name> or a rack JSON file")
        if module:
            p.add_argument("module", help="module shorthand or a module JSON file")
        return p

    add("validate", "Check the rack axioms", module=False)
    add("info", "Show orbits and the operation table", module=False)
    for name in ("homology", "cohomology"):
        p = add(name, f"Rack or quandle {name} with module coefficients")
        p.add_argument("--max-degree", type=int, default=2, help="Highest degree reported")
        p.add_argument("--base", type=int, default=0, help="Base element z")
        p.add_argument("--theory", choices=[t.value for t in Theory], default=Theory.RACK.value)
        p.add_argument("--oracle", action="store_true", help="Cross-check with mod-p and rational ranks")
    p = add("ext", "Extensions of the rack by a left module")
    p.add_argument("--oracle", action="store_true", help="Cross-check by enumerating factor sets")
    p = add("derivations", "Der, PDer and H^1")
    p.add_argument("--base", type=int, default=0, help="Base element z")
    p = sub.add_parser("tensor", parents=[common], help="A (x)_X B for a right module A and a left module B")
    p.add_argument("rack")
    p.add_argument("module_a", help="right module")
    p.add_argument("module_b", help="left module")
    p = add("check-module", "Check the module axioms")
    p.add_argument("--variance", choices=[v.value for v in Variance], default=Variance.LEFT.value)
    p.add_argument("--quandle", action="store_true", help="Also check psi_{x,x} + phi_{x,x} = id")
    p.add_argument("--collapse", type=int, metavar="LENGTH", help="Also check ZX (x)_X A = A up to this word length")
    p = add("z-independence", "Compare H^1 and H_n across base elements")
    p.add_argument("--max-degree", type=int, default=1, help="Highest homology degree compared")
    return parser


def run(argv: Optional[list] = None) -> int:
    """Parse arguments, run one command and return its exit code"""
    args = build_parser().parse_args(argv)
    try:
        config = ConfigManager(config_file=args.config).config
    except RackHomError as e:
        print_output(str(e), error=True)
        return e.exit_code
    setup_logging(level=config.log_level, verbose=args.verbose)
    fmt = args.format or config.output.format

    try:
        payload, code = COMMANDS[args.command](args, config)
    except RackHomError as e:
        logger.error(f"{args.command} failed: {e}")
        print_output(str(e), error=True)
        return e.exit_code
    except Exception as e:
        logger.critical(f"Unhandled exception: {e}", exc_info=True)
        print_output(f"An error occurred: {e}", error=True)
        return 1

    if fmt == "json":
        sys.stdout.write(render_json(payload) + "\n")
    else:
        print_output(render_text(payload), style="green" if code == 0 else "red")
    return code


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
