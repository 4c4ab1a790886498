"""Command-line entry point: design, simulate, collect, score, analyze."""

import argparse
import sys

from . import composition, design, lpd, scoring, service, terms
from .errors import BwslexError
from .simulate import SimConfig, simulate as run_simulation


def _cmd_gen_tuples(args) -> int:
    term_list = terms.load_terms(args.terms)
    tuples = design.generate_design(
        term_list, factor=args.factor, seed=args.seed, pair_cap=args.pair_cap,
    )
    design.save_tuples(tuples, args.out)
    report = design.validate_design(tuples, term_list, cap=args.pair_cap)
    print(f"wrote {report.n_tuples} tuples for {report.n_terms} terms to {args.out}")
    print(f"max pair co-occurrence: {report.max_pair_cooccurrence}")
    if not report.ok:
        for violation in report.violations:
            print(f"VIOLATION: {violation}", file=sys.stderr)
        return 1
    return 0


def _cmd_score(args) -> int:
    tuples = design.load_tuples(args.tuples)
    responses = scoring.load_responses(args.responses)
    if args.gold:
        gold = scoring.load_gold(args.gold)
        responses, report = scoring.filter_annotators(
            responses, gold, threshold=args.min_gold_accuracy, tuples=tuples,
        )
        print(f"gold-filtered annotators: {len(report.discarded_annotators)} discarded")
        if report.ungraded_annotators:
            print(f"annotators with no gold questions: {len(report.ungraded_annotators)}")
        # gold questions measure annotators; they are not scored
        responses = [r for r in responses if r.tuple_id not in gold]
    lexicon = scoring.score(responses, tuples)
    terms.save_lexicon(lexicon, args.out)
    print(f"scored {len(lexicon)} terms from {len(responses)} responses -> {args.out}")
    return 0


def _cmd_reliability(args) -> int:
    tuples = design.load_tuples(args.tuples)
    responses = scoring.load_responses(args.responses)
    pooled = scoring.majority_agreement(responses, tuples, average="pooled")
    per_question = scoring.majority_agreement(responses, tuples, average="per_question")
    print(f"majority agreement (pooled over responses): {pooled:.3f}")
    print(f"majority agreement (mean over questions):   {per_question:.3f}")
    result = scoring.split_half_reliability(
        responses, tuples, n_splits=args.splits, seed=args.seed,
    )
    print(
        f"split-half Spearman: {result.spearman_mean:.3f} "
        f"(std {result.spearman_std:.3f} over {args.splits} splits)"
    )
    print(
        f"split-half Pearson:  {result.pearson_mean:.3f} "
        f"(std {result.pearson_std:.3f} over {args.splits} splits)"
    )
    if result.excluded_tuples:
        print(f"tuples excluded (fewer than 2 responses): {result.excluded_tuples}")
    return 0


def _cmd_lpd(args) -> int:
    lexicon = terms.load_lexicon(args.lexicon)
    tuples = design.load_tuples(args.tuples)
    responses = scoring.load_responses(args.responses)
    pairs = lpd.infer_pairs(responses, tuples)
    curve = lpd.agreement_curve(
        pairs, lexicon,
        window=args.window,
        grid_step=args.grid,
        confidence=args.confidence,
        two_sided=args.two_sided,
    )
    if args.curve_out:
        lpd.save_curve(curve, args.curve_out)
        print(f"wrote {len(curve.points)} curve points to {args.curve_out}")
    value = lpd.least_perceptible_difference(curve)
    if value is None:
        print("least perceptible difference: undefined (lower bound never stays above 0.5)")
        return 1
    print(f"least perceptible difference: {value:.3f}")
    return 0


def _cmd_analyze(args) -> int:
    lexicon = terms.load_lexicon(args.lexicon)
    inventory = (
        terms.load_modifier_inventory(args.modifiers)
        if args.modifiers else terms.load_default_inventory()
    )
    pairs, missing = composition.build_pairs(lexicon, inventory)
    if missing:
        print(f"phrases without an in-lexicon content word: {len(missing)}")
    rows = composition.group_impact(pairs, lpd=args.lpd, pos_threshold=args.pos_threshold)
    fits = composition.fit_fixed_shift(pairs, scope="per_category")
    negators = [p for p in pairs if p.category == "negator"]
    reversal = composition.evaluate_reversal(negators) if negators else None
    written = composition.emit_report(
        rows, fits, pairs, args.out_dir,
        min_pairs=args.min_pairs,
        reversal=reversal,
        lpd=args.lpd,
        pos_threshold=args.pos_threshold,
    )
    print(f"analyzed {len(pairs)} modifier pairs")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_simulate(args) -> int:
    tuples = design.load_tuples(args.tuples)
    latent = terms.load_lexicon(args.latent)
    config = SimConfig(
        latent=latent.entries,
        n_annotators=args.annotators,
        noise_sigma=args.noise,
        seed=args.seed,
    )
    responses = run_simulation(tuples, config)
    scoring.save_responses(responses, args.out)
    print(f"wrote {len(responses)} simulated responses to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    tuples = design.load_tuples(args.tuples)
    gold = scoring.load_gold(args.gold) if args.gold else {}
    campaign = service.Campaign(
        tuples, gold,
        target=args.target,
        gold_rate=args.gold_rate,
        seed=args.seed,
    )
    svc = service.AnnotationService(campaign, args.data_dir)
    service.run_server(svc, host=args.host, port=args.port, static_dir=args.static_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bwslex",
        description="Best-Worst Scaling toolkit for real-valued sentiment lexicons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-tuples", help="generate a balanced 4-tuple annotation design")
    p.add_argument("--terms", required=True, help="terms file, one term per line")
    p.add_argument("--factor", type=int, default=2, help="tuples per term / 1 (default 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pair-cap", type=int, default=design.DEFAULT_PAIR_CAP,
                   help="max allowed pair co-occurrence (default 2)")
    p.add_argument("--out", required=True, help="output tuples JSONL")
    p.set_defaults(func=_cmd_gen_tuples)

    p = sub.add_parser("score", help="aggregate responses into a scored lexicon")
    p.add_argument("--tuples", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--gold", help="gold key TSV; enables annotator filtering")
    p.add_argument("--min-gold-accuracy", type=float, default=scoring.DEFAULT_GOLD_THRESHOLD)
    p.add_argument("--out", required=True, help="output lexicon TSV")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("reliability", help="majority agreement and split-half reliability")
    p.add_argument("--tuples", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--splits", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_reliability)

    p = sub.add_parser("lpd", help="estimate the least perceptible difference")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--tuples", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--window", type=float, default=lpd.DEFAULT_WINDOW)
    p.add_argument("--grid", type=float, default=lpd.DEFAULT_GRID_STEP)
    p.add_argument("--confidence", type=float, default=lpd.DEFAULT_CONFIDENCE)
    p.add_argument("--two-sided", action="store_true",
                   help="use the two-sided normal quantile for the bound")
    p.add_argument("--curve-out", help="write the agreement curve TSV here")
    p.set_defaults(func=_cmd_lpd)

    p = sub.add_parser("analyze", help="modifier composition analysis")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--modifiers", help="modifier inventory TSV (default: bundled)")
    p.add_argument("--lpd", type=float, default=composition.DEFAULT_LPD)
    p.add_argument("--pos-threshold", type=float, default=composition.DEFAULT_POS_THRESHOLD)
    p.add_argument("--min-pairs", type=int, default=composition.DEFAULT_MIN_PAIRS)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="generate synthetic annotator responses")
    p.add_argument("--tuples", required=True)
    p.add_argument("--latent", required=True, help="latent scores TSV (lexicon format)")
    p.add_argument("--annotators", type=int, default=10)
    p.add_argument("--noise", type=float, default=0.15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("serve", help="run the local annotation service")
    p.add_argument("--tuples", required=True)
    p.add_argument("--gold", help="gold key TSV; ids must exist in the tuples file")
    p.add_argument("--gold-rate", type=float, default=service.DEFAULT_GOLD_RATE)
    p.add_argument("--target", type=int, default=service.DEFAULT_TARGET)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--data-dir", required=True)
    p.add_argument("--static-dir", help="annotation UI assets (default: bundled)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BwslexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
