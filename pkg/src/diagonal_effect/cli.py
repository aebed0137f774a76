"""Command-line interface: CSV/JSON parsing and reproducible run records.

Every command prints one RunRecord JSON document echoing its full effective
configuration (including every seed), so a record can be replayed
bit for bit.  Exact rationals serialize as "num/den" strings; only
p-values and standard errors are decimal floats.

Exit codes: 0 success, 2 input error, 3 budget or convergence error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Union

from . import __version__
from .errors import (
    BudgetExceededError,
    ConvergenceError,
    InputError,
    InvariantViolationError,
)
from .invariants import (
    gens_common_mixture_families,
    gens_common_mixture_listed3,
    gens_common_toric_listed3,
    gens_diag_effect,
    gens_independence,
    check_vanishing,
    moves_to_binomials,
)
from .markov import (
    Stationary,
    WalkConfig,
    enumerate_fiber,
    exact_test,
    exact_test_chains,
    fiber_walk,
    moves_for_model,
    verify_connectivity,
)
from .membership import boundary_membership_check, classify_toric_point
from .params import MixtureParams, ToricParams, mixture_point, toric_point
from .tables import (
    CountTable,
    ModelFamily,
    ModelForm,
    ModelSpec,
    normalize,
    sufficient_statistic,
)
from .toricideal import ideal_equal, toric_ideal

_FAMILIES = {
    "indep": ModelFamily.INDEPENDENCE,
    "diag": ModelFamily.DIAGONAL_EFFECT,
    "common": ModelFamily.COMMON_DIAGONAL_EFFECT,
}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_count_table(text: str) -> CountTable:
    """CSV of I lines with I comma-separated nonnegative integers."""
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise InputError("empty table input")
    expected = len(lines)
    rows = []
    for ln, line in enumerate(lines, 1):
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != expected:
            raise InputError(
                f"line {ln}: ragged row with {len(parts)} entries, expected {expected}"
            )
        row = []
        for col, part in enumerate(parts, 1):
            try:
                value = int(part)
            except ValueError:
                raise InputError(f"line {ln}, column {col}: {part!r} is not an integer") from None
            if value < 0:
                raise InputError(f"line {ln}, column {col}: negative entry {value}")
            row.append(value)
        rows.append(row)
    return CountTable.from_rows(rows)


def _parse_rational(value, field: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{field}: rationals must be integers or 'num/den' strings, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InputError(f"{field}: cannot parse rational from {value!r}") from None


def _parse_vector(data, field: str) -> tuple:
    if not isinstance(data, list) or not data:
        raise InputError(f"{field}: expected a nonempty list")
    return tuple(_parse_rational(x, f"{field}[{k}]") for k, x in enumerate(data))


def parse_params(
    text: str, model: Optional[ModelSpec] = None
) -> Union[ToricParams, MixtureParams]:
    """JSON parameters: toric keys zeta_r/zeta_c/zeta_gamma, or mixture keys
    alpha/r/c/d (d may be omitted for the common-diagonal model)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"parameter JSON is malformed: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("parameter JSON must be an object")

    if {"zeta_r", "zeta_c", "zeta_gamma"} <= set(data):
        params = ToricParams(
            zeta_r=_parse_vector(data["zeta_r"], "zeta_r"),
            zeta_c=_parse_vector(data["zeta_c"], "zeta_c"),
            zeta_g=_parse_vector(data["zeta_gamma"], "zeta_gamma"),
        )
        if (
            model is not None
            and model.family is ModelFamily.COMMON_DIAGONAL_EFFECT
            and not params.has_common_diagonal()
        ):
            raise InputError("zeta_gamma: common-diagonal model needs all entries equal")
        return params

    if {"alpha", "r", "c"} <= set(data):
        alpha = _parse_rational(data["alpha"], "alpha")
        if not (0 <= alpha <= 1):
            raise InputError(f"alpha: must lie in [0,1], got {alpha}")
        r = _parse_vector(data["r"], "r")
        c = _parse_vector(data["c"], "c")
        if "d" in data:
            d = _parse_vector(data["d"], "d")
        elif model is not None and model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
            d = tuple(Fraction(1, len(r)) for _ in r)
        else:
            raise InputError("d: missing (only the common-diagonal model defaults it to uniform)")
        params = MixtureParams(alpha=alpha, r=r, c=c, d=d)
        if (
            model is not None
            and model.family is ModelFamily.COMMON_DIAGONAL_EFFECT
            and not params.has_common_diagonal()
        ):
            raise InputError("d: common-diagonal model needs the uniform diagonal")
        return params

    raise InputError(
        "parameter JSON needs keys {zeta_r, zeta_c, zeta_gamma} or {alpha, r, c[, d]}"
    )


def _read_file(path: str, what: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path!r}: {exc}") from None


# ---------------------------------------------------------------------------
# run records
# ---------------------------------------------------------------------------

def _record(command: str, config: dict, outputs: dict) -> dict:
    return {
        "command": command,
        "config": config,
        "outputs": outputs,
        "versions": __version__,
    }


def _emit(record: dict, stream=None):
    stream = stream or sys.stdout
    json.dump(record, stream, indent=2)
    stream.write("\n")


def _family(name: str) -> ModelFamily:
    return _FAMILIES[name]


def _model(name: str, size: int, form: ModelForm = ModelForm.TORIC) -> ModelSpec:
    return ModelSpec(family=_family(name), form=form, size=size)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_invariants(args) -> dict:
    form = ModelForm(args.form)
    family = _family(args.model)
    if family is ModelFamily.DIAGONAL_EFFECT:
        # toric and mixture forms of this family share their invariants
        gens = gens_diag_effect(args.size)
    elif form is ModelForm.TORIC:
        if args.listed:
            if args.size != 3:
                raise InputError("--listed toric generators exist only for size 3")
            gens = gens_common_toric_listed3()
        else:
            model = _model(args.model, args.size)
            gens = [
                (f"move-binomial #{k}", poly)
                for k, poly in enumerate(moves_to_binomials(moves_for_model(model)), 1)
            ]
    else:
        if args.listed:
            if args.size != 3:
                raise InputError("--listed mixture generators exist only for size 3")
            gens = gens_common_mixture_listed3()
        else:
            gens = gens_common_mixture_families(args.size)

    def name_of(g):
        return g[0] if isinstance(g, tuple) else g.name

    def poly_of(g):
        return g[1] if isinstance(g, tuple) else g.poly

    outputs = {
        "count": len(gens),
        "generators": [{"name": name_of(g), "polynomial": str(poly_of(g))} for g in gens],
    }
    if args.evaluate:
        params = parse_params(
            _read_file(args.evaluate, "parameters"),
            ModelSpec(family=family, form=form, size=args.size),
        )
        if isinstance(params, ToricParams):
            point, _ = toric_point(params)
        else:
            point = mixture_point(params)
        if point.size != args.size:
            raise InputError(f"parameters have size {point.size}, expected {args.size}")
        report = check_vanishing([(name_of(g), poly_of(g)) for g in gens], point)
        outputs["vanishing"] = {
            "all_zero": report.all_zero,
            "values": [{"name": n, "value": str(v)} for n, v in report.entries],
        }
    return outputs


def _cmd_classify(args) -> dict:
    params = parse_params(_read_file(args.params, "parameters"))
    if not isinstance(params, ToricParams):
        raise InputError("classify expects toric parameters (zeta_r, zeta_c, zeta_gamma)")
    return classify_toric_point(params).to_json_dict()


def _cmd_boundary_check(args) -> dict:
    table = parse_count_table(_read_file(args.table, "table"))
    report = boundary_membership_check(normalize(table))
    return report.to_json_dict()


def _cmd_sample(args) -> dict:
    table = parse_count_table(_read_file(args.table, "table"))
    model = _model(args.model, table.size)
    config = WalkConfig(
        steps=args.steps,
        burn_in=args.burnin,
        thinning=args.thinning,
        seed=args.seed,
        stationary=Stationary(args.stationary),
    )
    moves = moves_for_model(model)
    record = _record(
        "sample",
        {"model": args.model, "table": table.to_lists(), **config.to_dict()},
        {"stream": "one JSON line per emitted table follows"},
    )
    _emit(record)
    for k, state in enumerate(fiber_walk(table, moves, config)):
        sys.stdout.write(json.dumps({"index": k, "table": state.to_lists()}) + "\n")
    return {}


def _cmd_exact_test(args) -> dict:
    table = parse_count_table(_read_file(args.table, "table"))
    model = _model(args.model, table.size)
    config = WalkConfig(steps=args.samples, seed=args.seed, stationary=Stationary.HYPERGEOMETRIC)
    if args.enumerate:
        result = exact_test(table, model, config, method="enumerate")
    elif args.chains > 1:
        result = exact_test_chains(table, model, config, args.chains)
    else:
        result = exact_test(table, model, config, method="mcmc")
    return result.to_json_dict()


def _cmd_enumerate_fiber(args) -> dict:
    table = parse_count_table(_read_file(args.table, "table"))
    model = _model(args.model, table.size)
    fiber = enumerate_fiber(sufficient_statistic(table, model), model, args.budget)
    return {
        "size": len(fiber),
        "tables": [t.to_lists() for t in fiber.tables],
    }


def _cmd_markov_moves(args) -> dict:
    model = _model(args.model, args.size)
    moves = moves_for_model(model)
    return {
        "count": len(moves),
        "moves": [
            {"label": m.label, "degree": m.degree, "cells": [list(r) for r in m.cells]}
            for m in moves
        ],
    }


def _cmd_toric_ideal(args) -> dict:
    model = _model(args.model, args.size)
    gens = toric_ideal(model, method=args.method)
    outputs = {
        "count": len(gens),
        "generators": [str(g) for g in gens],
        "method": args.method,
    }
    if args.verify_against == "listed":
        family = _family(args.model)
        if family is ModelFamily.COMMON_DIAGONAL_EFFECT:
            if args.size != 3:
                raise InputError("listed common-diagonal generators exist only for size 3")
            listed = [inv.poly for inv in gens_common_toric_listed3()]
        elif family is ModelFamily.DIAGONAL_EFFECT:
            listed = [inv.poly for inv in gens_diag_effect(args.size)]
        else:
            listed = [inv.poly for inv in gens_independence(args.size)]
        equal = ideal_equal(gens, listed)
        outputs["verify_against"] = "listed"
        outputs["ideal_equal"] = equal
        outputs["verdict"] = "EQUAL" if equal else "NOT EQUAL"
    return outputs


def _cmd_check_connectivity(args) -> dict:
    report = verify_connectivity(_family(args.model), args.size, args.max_n)
    return {
        "fibers_checked": report.fibers_checked,
        "tables_seen": report.tables_seen,
        "largest_fiber": report.largest_fiber,
        "all_connected": report.all_connected,
        "disconnected": [
            {"stat": repr(stat), "component_sizes": list(sizes)}
            for stat, sizes in report.disconnected
        ],
    }


# ---------------------------------------------------------------------------
# argument parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagonal-effect",
        description="Diagonal-effect models for square contingency tables: "
        "invariants, membership, Markov-basis sampling, toric ideals.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("invariants", help="print model invariants, optionally evaluated")
    p.add_argument("--model", choices=["diag", "common"], required=True)
    p.add_argument("--form", choices=["toric", "mixture"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--listed", action="store_true", help="use the fixed size-3 generator lists")
    p.add_argument("--evaluate", metavar="PARAMS_JSON", help="evaluate at this parameter point")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("classify", help="membership verdict for a toric parameter point")
    p.add_argument("--params", required=True, metavar="PARAMS_JSON")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("boundary-check", help="support-pattern checks for a normalized table")
    p.add_argument("--table", required=True, metavar="TABLE_CSV")
    p.set_defaults(func=_cmd_boundary_check)

    p = sub.add_parser("sample", help="stream fiber-walk samples as JSON lines")
    p.add_argument("--model", choices=["diag", "common"], required=True)
    p.add_argument("--table", required=True, metavar="TABLE_CSV")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--burnin", type=int, default=None)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stationary", choices=["uniform", "hypergeometric"], default="hypergeometric")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("exact-test", help="exact conditional chi-square test on the fiber")
    p.add_argument("--model", choices=["diag", "common"], required=True)
    p.add_argument("--table", required=True, metavar="TABLE_CSV")
    p.add_argument("--samples", type=int, default=50_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--enumerate", action="store_true", help="exact p-value by total enumeration")
    p.add_argument("--chains", type=int, default=1)
    p.set_defaults(func=_cmd_exact_test)

    p = sub.add_parser("enumerate-fiber", help="list every table sharing the sufficient statistic")
    p.add_argument("--model", choices=["diag", "common"], required=True)
    p.add_argument("--table", required=True, metavar="TABLE_CSV")
    p.add_argument("--budget", type=int, default=10_000_000)
    p.set_defaults(func=_cmd_enumerate_fiber)

    p = sub.add_parser("markov-moves", help="print the move family of a model")
    p.add_argument("--model", choices=["diag", "common"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=_cmd_markov_moves)

    p = sub.add_parser("toric-ideal", help="toric ideal generators from the design matrix")
    p.add_argument("--model", choices=["indep", "diag", "common"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--method", choices=["saturation", "elimination"], default="saturation")
    p.add_argument("--verify-against", choices=["listed"], default=None)
    p.set_defaults(func=_cmd_toric_ideal)

    p = sub.add_parser("check-connectivity", help="exhaustive desk-scale fiber connectivity sweep")
    p.add_argument("--model", choices=["diag", "common"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=_cmd_check_connectivity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func", "subcommand")
    }
    try:
        outputs = args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceededError, ConvergenceError) as exc:
        print(f"budget/convergence error: {exc}", file=sys.stderr)
        return 3
    except InvariantViolationError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4
    if outputs:
        _emit(_record(args.subcommand, config, outputs))
    return 0


if __name__ == "__main__":
    sys.exit(main())
