"""Command-line entry point: every module behind one reproducible command.

Subcommands: simulate, bounds, generate, district, verify, experiment.
All randomness flows through the single global ``--seed`` (printed at
startup), so any published number can be regenerated from the command
line.  Exit codes: 0 success/PASS, 1 usage error, 2 data error,
3 verification FAIL, 4 resource guard exceeded.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bounds as bounds_mod
from . import fileio
from .core import (
    ADVERSARIAL,
    FIXED,
    SYMMETRIC,
    ELECTION_CLASSES,
    TieBreakOrder,
    WeightVector,
    classify,
)
from .districting import (
    TopChoiceProfile,
    bad_partition_search,
    brute_force_districting,
    enumerate_symmetric_partitions,
    plurality_districting,
)
from .engine import DistrictElection, run_and_measure, run_election
from .errors import DataError, DomainError, ResourceGuardError
from .experiments import (
    ExperimentConfig,
    emit_csv,
    ingest,
    load_ratings_csv,
    normalize_rows,
    run_experiment,
)
from .generators import (
    DEFAULT_EPSILON,
    CPartitionInstance,
    gen_t2,
    gen_t3,
    gen_t4,
    gen_t5,
    gen_t6_gadget,
    gen_t9,
)
from .rules import parse_rule

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_FAIL = 3
EXIT_GUARD = 4


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"expected a comma-separated integer list, got {text!r}") from None


def make_tiebreak(text: str, m: int) -> TieBreakOrder:
    """Parse ``fixed``, ``adversarial``, or ``<mode>:<comma permutation>``."""
    mode_text, _, order_text = text.partition(":")
    mode = {"fixed": FIXED, "adversarial": ADVERSARIAL}.get(mode_text)
    if mode is None:
        raise DomainError(f"unknown tie-break mode {mode_text!r}")
    if not order_text:
        return TieBreakOrder.identity(m, mode)
    return TieBreakOrder(tuple(_int_list(order_text)), mode)


def format_tiebreak(tiebreak: TieBreakOrder) -> str:
    mode = "fixed" if tiebreak.mode == FIXED else "adversarial"
    return f"{mode}:{','.join(str(j) for j in tiebreak.order)}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distvote",
        description="Run, generate, bound, and verify district-based elections.",
    )
    parser.add_argument("--seed", type=int, default=0, help="global random seed (printed at startup)")
    parser.add_argument(
        "--tiebreak",
        default="fixed",
        help="tie resolution: fixed | adversarial | <mode>:<comma permutation>",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a district-based election from CSV files")
    p.add_argument("--profile", required=True, help="profile CSV (voter,<alt_0>,...)")
    p.add_argument("--partition", required=True, help="partition CSV (voter,district)")
    p.add_argument("--weights", required=True, help="weights CSV (district,weight)")
    p.add_argument("--rule", required=True, help="rv | plurality | borda | harmonic | scores:<s0>,...")
    p.add_argument("--report", help="optional per-alternative report CSV")

    p = sub.add_parser("bounds", help="print the closed-form distortion bounds as a CSV row")
    p.add_argument("--class", dest="eclass", required=True, choices=ELECTION_CLASSES)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, help="total voters (non-symmetric classes)")
    p.add_argument("--n-min", type=int, help="smallest district size")
    p.add_argument("--n-max", type=int, help="largest district size")
    p.add_argument("--district-size", type=int, default=1, help="district size for the symmetric class")
    p.add_argument("--gamma", type=float, default=1.0, help="single-district distortion of the rule")

    p = sub.add_parser("generate", help="emit a worst-case instance as profile/partition/weights CSVs")
    p.add_argument("--theorem", required=True, choices=["t2", "t3", "t4", "t5", "t6", "t9"])
    p.add_argument("--class", dest="eclass", choices=ELECTION_CLASSES, default=SYMMETRIC)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--sizes", help="comma-separated district sizes")
    p.add_argument("--epsilon", type=float, default=None, help="perturbation size (family default if omitted)")
    p.add_argument("--q", type=int, help="group count for t5/t6")
    p.add_argument("--numbers", help="positive integers for the t6 gadget, e.g. 3,2,3,2")
    p.add_argument("--out", required=True, help="output prefix for the three CSV files")

    p = sub.add_parser("district", help="choose a partition for a given profile")
    p.add_argument("--algo", required=True, choices=["thm8", "brute", "bad-search"])
    p.add_argument("--profile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rule", default="plurality")
    p.add_argument("--target", type=int, help="alternative the brute-force search must elect")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--out", required=True, help="partition CSV to write")

    p = sub.add_parser("verify", help="check a worst-case family against its closed form")
    p.add_argument("--theorem", required=True, choices=["t2", "t3", "t4", "t5", "t6", "t8", "t9"])
    p.add_argument("--class", dest="eclass", choices=ELECTION_CLASSES, default=SYMMETRIC)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--sizes")
    p.add_argument("--epsilon", type=float, default=None, help="perturbation size (family default if omitted)")
    p.add_argument("--q", type=int)
    p.add_argument("--numbers")
    p.add_argument("--counts", help="explicit first-choice counts for t8, e.g. 5,3,1,3")
    p.add_argument("--cases", type=int, default=100, help="random t8 cases to check")
    p.add_argument("--tol", type=float, default=1e-3, help="relative gap tolerance")

    p = sub.add_parser("experiment", help="ratings-driven distortion simulations")
    p.add_argument("--ratings", required=True, help="ratings CSV (voter,<item ids...>; blanks missing)")
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--voters", type=int, default=100)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--k", default="1,5,10,15,20,25", help="comma-separated district counts")
    p.add_argument("--mode", choices=["random", "bad"], default="random")
    p.add_argument("--inner", type=int, default=100, help="inner partitions per trial in bad mode")
    p.add_argument("--weighted", action="store_true", help="draw integer district weights from [1,10]")
    p.add_argument("--rules", default="rv,plurality,borda,harmonic")
    p.add_argument("--lo", type=float, default=-10.0)
    p.add_argument("--hi", type=float, default=10.0)
    p.add_argument("--out", required=True, help="result CSV to write")

    return parser


def _alt_name(j: int) -> str:
    return f"alt_{j}"


def cmd_simulate(args) -> int:
    profile = fileio.read_profile_csv(args.profile)
    partition = fileio.read_partition_csv(args.partition)
    weights = fileio.read_weights_csv(args.weights)
    rule = parse_rule(args.rule, profile.m)
    tiebreak = make_tiebreak(args.tiebreak, profile.m)
    election = DistrictElection(profile, partition, weights, rule, tiebreak)
    outcome, report = run_and_measure(election)
    sizes = partition.sizes()
    print(f"class: {classify(partition, weights)}  rule: {rule.name}  tiebreak: {format_tiebreak(tiebreak)}")
    for d, j in enumerate(outcome.local_winners):
        print(f"district {d}: winner {_alt_name(j)} (size {sizes[d]}, weight {weights.weights[d]:g})")
    welfare = profile.welfare_vector()
    print("weighted approval: " + " ".join(f"{_alt_name(j)}={s:g}" for j, s in enumerate(outcome.weighted_scores)))
    print("social welfare: " + " ".join(f"{_alt_name(j)}={w:.12g}" for j, w in enumerate(welfare)))
    print(f"overall winner: {_alt_name(outcome.winner)}")
    print(f"optimal: {_alt_name(report.optimal_alt)} (sw {report.optimal_sw:.12g})")
    print(f"distortion: {report.distortion:.12g}")
    if args.report:
        with open(args.report, "w", newline="\n") as f:
            f.write("alternative,social_welfare,weighted_approval,is_winner,is_optimal\n")
            for j in range(profile.m):
                f.write(
                    f"{j},{welfare[j]:.12g},{outcome.weighted_scores[j]:.12g},"
                    f"{int(j == outcome.winner)},{int(j == report.optimal_alt)}\n"
                )
        print(f"report written to {args.report}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.eclass == SYMMETRIC:
        q = bounds_mod.BoundQuery.symmetric(args.m, args.k, args.district_size, args.gamma)
    else:
        if args.n is None or args.n_min is None or args.n_max is None:
            raise DomainError("non-symmetric bounds need --n, --n-min and --n-max")
        q = bounds_mod.BoundQuery(args.eclass, args.n, args.m, args.k, args.n_min, args.n_max, args.gamma)
    print("class,n,m,k,n_min,n_max,gamma,gamma_bound,rv_bound,pv_bound,ordinal_lower_bound")
    print(
        f"{q.eclass},{q.n},{q.m},{q.k},{q.n_min},{q.n_max},{q.gamma:g},"
        f"{bounds_mod.gamma_bound(q):.12g},{bounds_mod.rv_bound(q):.12g},"
        f"{bounds_mod.pv_bound(q):.12g},{bounds_mod.ordinal_lower_bound(q):.12g}"
    )
    return EXIT_OK


def _default_sizes(tag: str, eclass: str, m: int, k: int) -> list[int]:
    if tag == "t2":
        base = 2
    else:
        base = m if (m % 2 == 0 or k < 3 or eclass == "unrestricted") else 2 * m
    if eclass == SYMMETRIC:
        return [base] * k
    return [base, 2 * base] + [base] * (k - 2)


def _build_instance(args):
    tag = args.theorem
    if tag in ("t2", "t3", "t4"):
        if args.m is None or args.k is None:
            raise DomainError(f"{tag} needs --m and --k")
        sizes = _int_list(args.sizes) if args.sizes else _default_sizes(tag, args.eclass, args.m, args.k)
        gen = {"t2": gen_t2, "t3": gen_t3, "t4": gen_t4}[tag]
        eps = DEFAULT_EPSILON if args.epsilon is None else args.epsilon
        return gen(args.eclass, args.m, args.k, sizes, eps)
    if tag == "t5":
        if args.k is None or args.q is None:
            raise DomainError("t5 needs --k and --q")
        return gen_t5(args.k, args.q, args.epsilon)
    if tag == "t6":
        if args.numbers is None or args.k is None:
            raise DomainError("t6 needs --numbers and --k")
        return gen_t6_gadget(CPartitionInstance.from_integers(_int_list(args.numbers)), args.k)
    if tag == "t9":
        if args.m is None:
            raise DomainError("t9 needs --m")
        return gen_t9(args.m)
    raise DomainError(f"unknown family {tag!r}")


def cmd_generate(args) -> int:
    inst = _build_instance(args)
    e = inst.election
    fileio.write_profile_csv(f"{args.out}.profile.csv", e.profile)
    fileio.write_partition_csv(f"{args.out}.partition.csv", e.partition)
    fileio.write_weights_csv(f"{args.out}.weights.csv", e.weights)
    print(f"family: {inst.theorem_tag}  rule: {e.rule.name}  tiebreak: {format_tiebreak(e.tiebreak)}")
    print(f"n={e.profile.n} m={e.profile.m} k={e.k} epsilon={inst.epsilon:g}")
    print(f"expected winner: {_alt_name(inst.expected_winner)}  optimal: {_alt_name(inst.optimal_alt)}")
    print(f"limit distortion: {inst.limit_distortion:.12g}")
    if inst.notes:
        print(f"note: {inst.notes}")
    print(f"wrote {args.out}.profile.csv, {args.out}.partition.csv, {args.out}.weights.csv")
    return EXIT_OK


def cmd_district(args) -> int:
    profile = fileio.read_profile_csv(args.profile)
    rule = parse_rule(args.rule, profile.m)
    if args.algo == "thm8":
        top = TopChoiceProfile.from_profile(profile)
        result = plurality_districting(top, args.k)
        fileio.write_partition_csv(args.out, result.partition)
        print(
            f"thm8: winner={_alt_name(result.achieved_winner)} districts_won={result.districts_won} "
            f"k={args.k} tiebreak={format_tiebreak(result.tiebreak)}"
        )
        return EXIT_OK
    if args.algo == "brute":
        if args.target is None:
            raise DomainError("brute-force districting needs --target")
        result = brute_force_districting(profile, args.k, rule, args.target)
        if result is None:
            print(f"brute: no balanced {args.k}-districting elects {_alt_name(args.target)}")
            return EXIT_FAIL
        fileio.write_partition_csv(args.out, result.partition)
        print(
            f"brute: winner={_alt_name(result.achieved_winner)} districts_won={result.districts_won} "
            f"k={args.k}"
        )
        return EXIT_OK
    partition = bad_partition_search(profile, args.k, rule, args.trials, args.seed)
    fileio.write_partition_csv(args.out, partition)
    election = DistrictElection(
        profile, partition, WeightVector.uniform(args.k), rule, TieBreakOrder.identity(profile.m)
    )
    _, report = run_and_measure(election)
    print(f"bad-search: trials={args.trials} seed={args.seed} distortion={report.distortion:.12g}")
    return EXIT_OK


def _verify_witness(args) -> list[str]:
    inst = _build_instance(args)
    outcome, report = run_and_measure(inst.election)
    gap = abs(report.distortion - inst.limit_distortion) / inst.limit_distortion
    ok = outcome.winner == inst.expected_winner and gap <= args.tol
    status = "PASS" if ok else "FAIL"
    return [
        f"{status} {inst.theorem_tag} class={args.eclass} m={inst.election.profile.m} "
        f"k={inst.election.k} eps={inst.epsilon:g} measured={report.distortion:.12g} "
        f"limit={inst.limit_distortion:.12g} relgap={gap:.3g} winner={_alt_name(outcome.winner)}"
    ]


def _verify_t5(args) -> list[str]:
    if args.k is None or args.q is None:
        raise DomainError("t5 needs --k and --q")
    inst = gen_t5(args.k, args.q, args.epsilon)
    e = inst.election
    b = inst.optimal_alt
    district_wins = 0
    checked = 0
    for partition in enumerate_symmetric_partitions(e.profile.n, e.k):
        election = DistrictElection(e.profile, partition, e.weights, e.rule, e.tiebreak)
        outcome = run_election(election)
        district_wins += sum(1 for j in outcome.local_winners if j == b)
        checked += 1
    found = brute_force_districting(e.profile, e.k, e.rule, b)
    ok = district_wins == 0 and found is None
    status = "PASS" if ok else "FAIL"
    return [
        f"{status} t5 k={args.k} q={args.q} partitions={checked} "
        f"optimal_district_wins={district_wins} electing_partition_found={found is not None}"
    ]


def _verify_t6(args) -> list[str]:
    if args.numbers is None or args.k is None:
        raise DomainError("t6 needs --numbers and --k")
    inst = CPartitionInstance.from_integers(_int_list(args.numbers))
    gadget = gen_t6_gadget(inst, args.k)
    e = gadget.election
    truth = inst.has_equal_split()
    found = brute_force_districting(e.profile, e.k, e.rule, gadget.optimal_alt) is not None
    ok = truth == found
    status = "PASS" if ok else "FAIL"
    return [
        f"{status} t6 k={args.k} q={inst.q} equal_split={truth} districting_found={found}"
    ]


def sample_top_choice_cases(cases: int, seed: int) -> list[tuple[list[int], int]]:
    """Random (first-choice counts, k) pairs with n <= 70 divisible by k.

    Districts hold at least 2m voters, which keeps the guarantee
    attainable (winning a district takes ceil(s/m) first choices and the
    plurality winner always has at least n/m of them).
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < cases:
        k = int(rng.integers(2, 8))
        m_cap = min(8, 70 // (2 * k))
        m = int(rng.integers(2, m_cap + 1))
        s = int(rng.integers(2 * m, 70 // k + 1))
        tops = rng.integers(0, m, size=s * k)
        out.append((list(np.bincount(tops, minlength=m)), k))
    return out


def _verify_t8(args) -> list[str]:
    if args.counts:
        if args.k is None:
            raise DomainError("t8 with explicit --counts needs --k")
        cases = [(_int_list(args.counts), args.k)]
    else:
        cases = sample_top_choice_cases(args.cases, args.seed)
    failures = 0
    for counts, k in cases:
        top = TopChoiceProfile.from_counts(counts)
        needed = -(-k // 2)
        try:
            result = plurality_districting(top, k)
        except DomainError:
            failures += 1
            continue
        if result.districts_won < needed:
            failures += 1
    status = "PASS" if failures == 0 else "FAIL"
    return [f"{status} t8 cases={len(cases)} failures={failures}"]


def _verify_t9(args) -> list[str]:
    if args.m is None:
        raise DomainError("t9 needs --m")
    inst = gen_t9(args.m)
    _, report = run_and_measure(inst.election)
    ok = abs(report.distortion - inst.limit_distortion) <= 1e-9
    status = "PASS" if ok else "FAIL"
    return [
        f"{status} t9 m={args.m} measured={report.distortion:.12g} expected={inst.limit_distortion:.12g}"
    ]


def cmd_verify(args) -> int:
    if args.theorem in ("t2", "t3", "t4"):
        lines = _verify_witness(args)
    elif args.theorem == "t5":
        lines = _verify_t5(args)
    elif args.theorem == "t6":
        lines = _verify_t6(args)
    elif args.theorem == "t8":
        lines = _verify_t8(args)
    else:
        lines = _verify_t9(args)
    for line in lines:
        print(line)
    return EXIT_OK if all(line.startswith("PASS") for line in lines) else EXIT_FAIL


def cmd_experiment(args) -> int:
    table = load_ratings_csv(args.ratings, args.lo, args.hi)
    pool = normalize_rows(ingest(table, args.m), args.lo, args.hi)
    rules = tuple(parse_rule(r.strip(), args.m) for r in args.rules.split(","))
    config = ExperimentConfig(
        m=args.m,
        voters_per_trial=args.voters,
        trials=args.trials,
        k_values=tuple(_int_list(args.k)),
        rules=rules,
        seed=args.seed,
        mode=args.mode,
        inner_trials=args.inner,
        weighted=args.weighted,
    )
    result = run_experiment(pool, config)
    emit_csv(result, args.out)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    print(f"seed: {args.seed}")
    handlers = {
        "simulate": cmd_simulate,
        "bounds": cmd_bounds,
        "generate": cmd_generate,
        "district": cmd_district,
        "verify": cmd_verify,
        "experiment": cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except ResourceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
