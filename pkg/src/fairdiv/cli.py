"""Command-line front end.

Subcommands: ``gen`` (random instance file), ``eval`` (score an allocation),
``minimize`` (exact index minimization), ``online`` (seeded mechanism run or
sampled means), ``support`` (exact outcome distribution) and ``experiment``
(the full pipeline to CSV).

Exit status: 0 on success, 1 on a domain error (bad file, invalid matrix,
search-space cap), 2 on a usage error.  Rational values print exactly as
``p/q`` unless ``--decimal`` asks for 6-digit decimals.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .experiment import generate_instance, load_config, run_experiment, write_csv
from .indices import (
    EnvyNormalization,
    IndexKind,
    SearchSpaceTooLarge,
    index_report,
)
from .model import (
    Allocation,
    FairDivError,
    Instance,
    load_allocation,
    load_instance,
    save_instance,
)
from .online import (
    SupportTooLarge,
    expected_true_utilities,
    mechanism_support,
    run_mechanism,
    sample_online_metrics,
    write_trace,
)
from .solvers import NotSquare, minimize_index

_INDEX_TOKENS = {"gini": IndexKind.GINI, "subjgini": IndexKind.SUBJECTIVE_GINI, "envy": IndexKind.ENVY}
_NORM_TOKENS = {"half": EnvyNormalization.HALF_DENOMINATOR, "full": EnvyNormalization.FULL_DENOMINATOR}


def _fmt(value: Fraction, decimal: bool) -> str:
    if decimal:
        return f"{float(value):.6f}"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _fmt_allocation(inst: Instance, alloc: Allocation) -> str:
    parts = []
    for j, a in enumerate(alloc.owner):
        owner = inst.agent_label(a) if a is not None else "-"
        parts.append(f"{inst.item_label(j)}->{owner}")
    return " ".join(parts) if parts else "(no items)"


def _print_report(inst, alloc, norm, decimal) -> None:
    report = index_report(inst, alloc, norm)
    print(f"gini {_fmt(report.gini, decimal)}")
    print(f"subjective_gini {_fmt(report.subjective_gini, decimal)}")
    print(f"envy {_fmt(report.envy, decimal)}")
    print(f"utilitarian {_fmt(report.utilitarian, decimal)}")
    print(f"egalitarian {_fmt(report.egalitarian, decimal)}")
    print(f"envy_free {'true' if report.envy_free else 'false'}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdiv",
        description="Inequality indices, exact solvers and online mechanisms "
        "for fair division of indivisible items.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random integer-bid instance file")
    p_gen.add_argument("--agents", type=int, required=True)
    p_gen.add_argument("--items", type=int, required=True)
    p_gen.add_argument("--max-util", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)

    p_eval = sub.add_parser("eval", help="score an allocation file against an instance")
    p_eval.add_argument("instance")
    p_eval.add_argument("allocation")
    p_eval.add_argument("--envy-norm", choices=sorted(_NORM_TOKENS), default="half")
    p_eval.add_argument("--decimal", action="store_true")

    p_min = sub.add_parser("minimize", help="exact index minimization over complete allocations")
    p_min.add_argument("instance")
    p_min.add_argument("--index", choices=sorted(_INDEX_TOKENS), required=True)
    p_min.add_argument("--envy-norm", choices=sorted(_NORM_TOKENS), default="half")
    p_min.add_argument("--all", action="store_true", help="print every minimizer")
    p_min.add_argument("--decimal", action="store_true")

    p_online = sub.add_parser("online", help="run an online mechanism (single trace or sampled means)")
    p_online.add_argument("instance")
    p_online.add_argument("--mechanism", choices=sorted(_INDEX_TOKENS), required=True)
    p_online.add_argument("--seed", type=int, default=0)
    p_online.add_argument("--order", choices=("given", "random"), default="given")
    p_online.add_argument("--samples", type=int, default=None)
    p_online.add_argument("--trace")
    p_online.add_argument("--envy-norm", choices=sorted(_NORM_TOKENS), default="half")
    p_online.add_argument("--decimal", action="store_true")

    p_support = sub.add_parser("support", help="exact outcome distribution of a mechanism")
    p_support.add_argument("instance")
    p_support.add_argument("--mechanism", choices=sorted(_INDEX_TOKENS), required=True)
    p_support.add_argument("--envy-norm", choices=sorted(_NORM_TOKENS), default="half")
    p_support.add_argument("--decimal", action="store_true")

    p_exp = sub.add_parser("experiment", help="run the experiment pipeline from a config file")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("-o", "--output", required=True)
    p_exp.add_argument("--quiet", action="store_true")

    return parser


def _cmd_gen(args) -> int:
    if args.agents < 1 or args.items < 0 or args.max_util < 0:
        raise FairDivError("gen needs agents >= 1, items >= 0 and max-util >= 0")
    if args.items == 0:
        inst = Instance(
            num_agents=args.agents,
            num_items=0,
            bids=tuple(() for _ in range(args.agents)),
        )
    else:
        inst = generate_instance(args.agents, args.items, args.max_util, args.seed)
    save_instance(inst, args.output)
    return 0


def _cmd_eval(args) -> int:
    inst = load_instance(args.instance)
    alloc = load_allocation(args.allocation, inst)
    _print_report(inst, alloc, _NORM_TOKENS[args.envy_norm], args.decimal)
    return 0


def _cmd_minimize(args) -> int:
    inst = load_instance(args.instance)
    result = minimize_index(inst, _INDEX_TOKENS[args.index], _NORM_TOKENS[args.envy_norm])
    print(f"minimum {_fmt(result.min_value, args.decimal)}")
    print(f"minimizers {len(result.minimizers)}")
    shown = result.minimizers if args.all else result.minimizers[:1]
    for alloc in shown:
        print(_fmt_allocation(inst, alloc))
    return 0


def _cmd_online(args) -> int:
    inst = load_instance(args.instance)
    kind = _INDEX_TOKENS[args.mechanism]
    norm = _NORM_TOKENS[args.envy_norm]
    if args.samples is not None:
        if args.samples < 1:
            raise FairDivError("--samples must be >= 1")
        order = None if args.order == "random" else list(range(inst.num_items))
        metrics = sample_online_metrics(
            inst, order, kind, norm, samples=args.samples, seed=args.seed
        )
        print(f"samples {args.samples}")
        print(f"mean_gini {_fmt(metrics.gini, args.decimal)}")
        print(f"mean_subjective_gini {_fmt(metrics.subjective_gini, args.decimal)}")
        print(f"mean_envy {_fmt(metrics.envy, args.decimal)}")
        print(f"mean_utilitarian {_fmt(metrics.utilitarian, args.decimal)}")
        print(f"mean_egalitarian {_fmt(metrics.egalitarian, args.decimal)}")
        return 0
    order = list(range(inst.num_items))
    if args.order == "random":
        random.Random(args.seed).shuffle(order)
    trace = run_mechanism(inst, order, kind, norm, seed=args.seed)
    if args.trace:
        write_trace(trace, args.trace, inst)
    print(f"order {' '.join(inst.item_label(j) for j in order)}")
    print(f"allocation {_fmt_allocation(inst, trace.final_allocation)}")
    _print_report(inst, trace.final_allocation, norm, args.decimal)
    return 0


def _cmd_support(args) -> int:
    inst = load_instance(args.instance)
    kind = _INDEX_TOKENS[args.mechanism]
    norm = _NORM_TOKENS[args.envy_norm]
    support = mechanism_support(inst, list(range(inst.num_items)), kind, norm)
    for alloc, prob in support:
        print(f"p={_fmt(prob, args.decimal)} {_fmt_allocation(inst, alloc)}")
    expected = expected_true_utilities(inst, support)
    line = " ".join(
        f"{inst.agent_label(i)}={_fmt(v, args.decimal)}" for i, v in enumerate(expected)
    )
    print(f"expected_utility {line}")
    return 0


def _cmd_experiment(args) -> int:
    config = load_config(args.config)
    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    rows = run_experiment(config, progress)
    write_csv(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


_HANDLERS = {
    "gen": _cmd_gen,
    "eval": _cmd_eval,
    "minimize": _cmd_minimize,
    "online": _cmd_online,
    "support": _cmd_support,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (FairDivError, SearchSpaceTooLarge, SupportTooLarge, NotSquare, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
