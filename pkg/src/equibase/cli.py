"""Command-line front end.

JSON in, JSON out: reports go to --output (default standard output),
human-readable progress to standard error.  Exit codes: 0 success,
2 infeasible input, 3 malformed input, 4 enumeration budget exceeded,
5 violated algorithm guarantee (always a bug).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import List, Optional

from .bitset import ids_of, mask_of, popcount
from .brute import (
    brute_equitable,
    brute_mms,
    exhaustive_rebalancing_exchange,
    matching_exchange_check,
)
from .catalog import (
    random_gf2_entries,
    random_partition_entries,
    sample_targets,
    two_tree_multigraphs,
    uniform_entries,
)
from .errors import (
    BudgetExceededError,
    InfeasibleError,
    InvariantViolationError,
    MalformedInputError,
    PreconditionError,
)
from .exchange import find_rebalancing_exchange, verify_exchangeable
from .fairdiv import (
    FairDivisionInstance,
    cut_and_choose_ef1_two_agents,
    ef1_allocate_trivalued,
    ef1_check,
    instance_from_doc,
    mms_allocate_bivalued,
    mms_threshold,
)
from .matroids import CountingMatroid, matroid_from_doc, spot_check_axioms
from .partition import (
    PartitionStats,
    check_two_set_conditions,
    equitable_partition,
    partition_into_k_bases,
    potentials,
    two_set_equitable_partition,
    validate_partition,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_MALFORMED = 3
EXIT_BUDGET = 4
EXIT_INVARIANT = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep usage errors on the malformed-input code
        raise MalformedInputError(message)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc


def _load_matroid(path: str) -> CountingMatroid:
    return CountingMatroid(matroid_from_doc(_load_json(path)))


def _load_set(path: str, matroid) -> int:
    doc = _load_json(path)
    if isinstance(doc, dict) and "elements" in doc:
        doc = doc["elements"]
    if not isinstance(doc, list) or not all(isinstance(e, int) for e in doc):
        raise MalformedInputError(f"{path} must hold a JSON list of element ids")
    mask = mask_of(doc)
    matroid._check_subset(mask)
    return mask


def _stats_doc(stats: PartitionStats, matroid: CountingMatroid) -> dict:
    return {
        "exchanges": stats.exchanges,
        "repairs": stats.repairs,
        "oracle_calls": matroid.oracle_calls,
    }


def _partition_doc(parts: List[int]) -> List[List[int]]:
    return [ids_of(p) for p in parts]


def _counts(parts, target):
    return [popcount(p & target) for p in parts]


def _cmd_partition(args) -> dict:
    matroid = _load_matroid(args.matroid)
    stats = PartitionStats()
    parts = partition_into_k_bases(matroid, args.k, stats)
    validate_partition(matroid, parts)
    return {
        "command": "partition",
        "parts": _partition_doc(parts),
        "stats": _stats_doc(stats, matroid),
    }


def _cmd_equitable(args) -> dict:
    matroid = _load_matroid(args.matroid)
    target = _load_set(args.set, matroid)
    stats = PartitionStats()
    parts = equitable_partition(matroid, args.k, target, stats=stats)
    validate_partition(matroid, parts)
    counts = _counts(parts, target)
    size = popcount(target)
    phi, psi, xi = potentials(parts, target, 0)
    report = {
        "command": "equitable",
        "parts": _partition_doc(parts),
        "stats": dict(_stats_doc(stats, matroid), phi=phi, psi=psi, xi=xi),
        "conditions": {
            "target_size": size,
            "counts": counts,
            "bounds_met": all(
                size // args.k <= c <= -(-size // args.k) for c in counts
            ),
        },
    }
    if args.oracle:
        report["oracle"] = {"equitable_partition_exists": brute_equitable(matroid, args.k, target)}
    return report


def _cmd_equitable2(args) -> dict:
    matroid = _load_matroid(args.matroid)
    s1 = _load_set(args.set1, matroid)
    s2 = _load_set(args.set2, matroid)
    stats = PartitionStats()
    parts = two_set_equitable_partition(matroid, args.k, s1, s2, stats=stats)
    validate_partition(matroid, parts)
    conditions = check_two_set_conditions(parts, s1, s2)
    conditions["counts_first"] = _counts(parts, s1)
    conditions["counts_second"] = _counts(parts, s2)
    conditions["profiles"] = [list(p) for p in conditions["profiles"]]
    phi, psi, xi = potentials(parts, s1, s2)
    return {
        "command": "equitable2",
        "parts": _partition_doc(parts),
        "stats": dict(_stats_doc(stats, matroid), phi=phi, psi=psi, xi=xi),
        "conditions": conditions,
    }


def _cmd_exchange(args) -> dict:
    matroid = _load_matroid(args.matroid)
    low = _load_set(args.b1, matroid)
    high = _load_set(args.b2, matroid)
    target = _load_set(args.set, matroid)
    found = find_rebalancing_exchange(matroid, low, high, target)
    new_low, new_high = low ^ found.elements, high ^ found.elements
    report = {
        "command": "exchange",
        "pivot": found.pivot,
        "exchange": ids_of(found.elements),
        "b1_after": ids_of(new_low),
        "b2_after": ids_of(new_high),
        "stats": {"oracle_calls": matroid.oracle_calls},
    }
    if args.oracle:
        brute = exhaustive_rebalancing_exchange(matroid, low, high, target)
        report["oracle"] = {
            "exchange_exists": brute is not None,
            "smallest_exchange": ids_of(brute.elements) if brute else None,
        }
    return report


def _fraction_str(x: Fraction) -> str:
    return str(x)


def _cmd_ef1(args) -> dict:
    inst = _instance(args)
    stats = PartitionStats()
    identical = all(v == inst.valuations[0] for v in inst.valuations)
    if identical:
        bundles = ef1_allocate_trivalued(inst, stats)
    elif inst.n == 2:
        bundles = cut_and_choose_ef1_two_agents(inst, stats)
    else:
        raise PreconditionError(
            "EF1 construction needs identical valuations, or two agents"
        )
    return {
        "command": "ef1",
        "bundles": _partition_doc(bundles),
        "report": {
            "ef1": ef1_check(inst, bundles),
            "mms_thresholds": None,
            "bundle_values": [
                _fraction_str(inst.value(i, bundles[i])) for i in range(inst.n)
            ],
        },
        "stats": _stats_doc(stats, inst.matroid),
    }


def _cmd_mms(args) -> dict:
    inst = _instance(args)
    stats = PartitionStats()
    bundles = mms_allocate_bivalued(inst, stats)
    thresholds = [
        mms_threshold(inst.valuations[i], inst.n, inst.matroid)
        for i in range(inst.n)
    ]
    report = {
        "command": "mms",
        "bundles": _partition_doc(bundles),
        "report": {
            "ef1": ef1_check(inst, bundles),
            "mms_thresholds": [_fraction_str(t) for t in thresholds],
            "bundle_values": [
                _fraction_str(inst.value(i, bundles[i])) for i in range(inst.n)
            ],
        },
        "stats": _stats_doc(stats, inst.matroid),
    }
    if args.oracle:
        report["oracle"] = {
            "mms_values": [
                _fraction_str(brute_mms(inst, i)) for i in range(inst.n)
            ]
        }
    return report


def _instance(args) -> FairDivisionInstance:
    doc = _load_json(args.instance)
    inst = instance_from_doc(doc)
    return FairDivisionInstance(CountingMatroid(inst.matroid), inst.valuations)


def _cmd_verify(args) -> dict:
    rng = random.Random(args.seed)
    checks = []

    def record(name: str, passed: bool, cases: int) -> None:
        checks.append({"name": name, "passed": bool(passed), "cases": cases})
        print(f"{'PASS' if passed else 'FAIL'}  {name} ({cases} cases)", file=sys.stderr)

    entries = list(two_tree_multigraphs(4)) + uniform_entries(4)
    entries += random_gf2_entries(10, rng) + random_partition_entries(10, rng)
    sampled = rng.sample(entries, min(40, len(entries)))

    ok = True
    cases = 0
    for entry in sampled[:6]:
        ok = ok and spot_check_axioms(entry.matroid, rng, trials=120)
        cases += 1
    record("matroid axioms", ok, cases)

    ok = True
    cases = 0
    for entry in sampled:
        matroid = entry.matroid
        initial = partition_into_k_bases(matroid, entry.k)
        for target in sample_targets(matroid, 40, rng):
            parts = equitable_partition(matroid, entry.k, target, parts=initial)
            validate_partition(matroid, parts)
            size = popcount(target)
            counts = _counts(parts, target)
            ok = ok and all(
                size // entry.k <= c <= -(-size // entry.k) for c in counts
            )
            cases += 1
    record("equitable split bounds", ok, cases)

    ok = True
    cases = 0
    for entry in sampled[:12]:
        matroid = entry.matroid
        parts = partition_into_k_bases(matroid, entry.k)
        low, high = parts[0], parts[1] if entry.k > 1 else parts[0]
        if entry.k < 2:
            continue
        for target in sample_targets(matroid, 25, rng):
            tgt = target & (low | high)
            if popcount(low & tgt) >= popcount(high & tgt):
                continue
            found = find_rebalancing_exchange(matroid, low, high, tgt)
            ok = ok and verify_exchangeable(matroid, low, high, found.elements)
            brute = exhaustive_rebalancing_exchange(matroid, low, high, tgt)
            ok = ok and brute is not None
            cases += 1
    record("rebalancing exchanges", ok, cases)

    ok = True
    cases = 0
    for entry in sampled[:12]:
        matroid = entry.matroid
        initial = partition_into_k_bases(matroid, entry.k)
        for _ in range(8):
            s1 = rng.getrandbits(matroid.m)
            s2 = rng.getrandbits(matroid.m) & ~s1
            parts = two_set_equitable_partition(
                matroid, entry.k, s1, s2, parts=initial
            )
            report = check_two_set_conditions(parts, s1, s2)
            ok = ok and report["condition_i"] and report["condition_ii"]
            ok = ok and report["condition_iii"]
            cases += 1
    record("two-set split conditions", ok, cases)

    ok = True
    cases = 0
    for entry in sampled[:10]:
        matroid = entry.matroid
        parts = partition_into_k_bases(matroid, entry.k)
        for _ in range(5):
            i, j = rng.randrange(entry.k), rng.randrange(entry.k)
            ok = ok and matching_exchange_check(matroid, parts[i], parts[j])
            cases += 1
    record("matching exchange", ok, cases)

    ok = True
    cases = 0
    for entry in sampled:
        matroid = entry.matroid
        if matroid.m > 10 or entry.k > 3:
            continue
        n = entry.k
        for _ in range(3):
            values = tuple(
                Fraction(rng.choice((0, 1, 3))) for _ in range(matroid.m)
            )
            inst = FairDivisionInstance(matroid, tuple([values] * n))
            bundles = ef1_allocate_trivalued(inst)
            ok = ok and ef1_check(inst, bundles)
            cases += 1
        if cases >= 30:
            break
    record("EF1 for three-valued identical agents", ok, cases)

    ok = True
    cases = 0
    for entry in sampled:
        matroid = entry.matroid
        if matroid.m > 10 or entry.k > 3:
            continue
        n = entry.k
        valuations = []
        for _ in range(n):
            a, b = sorted(rng.sample(range(-2, 6), 2))
            valuations.append(
                tuple(Fraction(rng.choice((a, b))) for _ in range(matroid.m))
            )
        inst = FairDivisionInstance(matroid, tuple(valuations))
        bundles = mms_allocate_bivalued(inst)
        for i in range(n):
            ok = ok and inst.value(i, bundles[i]) >= brute_mms(inst, i)
        cases += 1
        if cases >= 15:
            break
    record("maximin-share allocations", ok, cases)

    all_ok = all(c["passed"] for c in checks)
    if not all_ok:
        raise InvariantViolationError("verification matrix has failures")
    return {"command": "verify", "seed": args.seed, "checks": checks}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="equibase", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, matroid=True):
        if matroid:
            p.add_argument("--matroid", required=True, help="matroid JSON file")
        p.add_argument("--output", help="write the JSON report here")
        p.add_argument("--oracle", action="store_true", help="cross-check exhaustively")

    p = sub.add_parser("partition", help="split the ground set into k bases")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=_cmd_partition)

    p = sub.add_parser("equitable", help="k bases splitting one set evenly")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--set", required=True, help="element set JSON file")
    p.set_defaults(handler=_cmd_equitable)

    p = sub.add_parser("equitable2", help="k bases balancing two disjoint sets")
    common(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--set1", required=True)
    p.add_argument("--set2", required=True)
    p.set_defaults(handler=_cmd_equitable2)

    p = sub.add_parser("exchange", help="one rebalancing exchange between two bases")
    common(p)
    p.add_argument("--b1", required=True, help="receiving basis JSON file")
    p.add_argument("--b2", required=True, help="donating basis JSON file")
    p.add_argument("--set", required=True, help="target set JSON file")
    p.set_defaults(handler=_cmd_exchange)

    p = sub.add_parser("ef1", help="EF1 allocation for a fair-division instance")
    common(p, matroid=False)
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.set_defaults(handler=_cmd_ef1)

    p = sub.add_parser("mms", help="maximin-share allocation for two-valued agents")
    common(p, matroid=False)
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.set_defaults(handler=_cmd_mms)

    p = sub.add_parser("verify", help="run the small-instance check matrix")
    common(p, matroid=False)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_verify)

    return parser


def _emit(report: dict, output: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        report = args.handler(args)
    except MalformedInputError as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (InfeasibleError, PreconditionError) as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"error: enumeration budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolationError as exc:
        print(f"error: guarantee violated (bug): {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(report, args.output)
    print(f"{report['command']}: ok", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
