"""Run the full campaign grid and print one summary row per (bound, p).

    python3 scripts/run_campaigns.py --trials 10000 --out-dir reports/
"""
import argparse
import json
import os

from polyspec.campaign import CampaignConfig, run_campaign, write_report
from polyspec.linalg import pnorm_label

GRID = [
    ("hoffman-wielandt", [2]),
    ("poly-hoffman-wielandt", [2]),
    ("normal-arbitrary", [2]),
    ("kahan", [1, 2, "inf"]),
    ("poly-kahan", [1, 2, "inf"]),
    ("poly-bdm", [1, 2, "inf"]),
    ("cor-2mn", [1, 2, "inf"]),
    ("elsner", [1, 2, "inf"]),
    ("nbounded", [1, 2, "inf"]),
    ("det-perturbation", [1, 2, "inf"]),
    ("nonmonic-thm37", [1]),
    ("wielandt-scalar", [2]),
    ("wielandt-poly", [2]),
    ("gamma-bounds", [2]),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-dir", default=None, help="write one JSON report per campaign here")
    ap.add_argument("--only", nargs="*", default=None, help="restrict to these bound ids")
    args = ap.parse_args()
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)

    header = f"{'bound':24} {'p':>4} {'trials':>7} {'viol':>5} {'unmet':>5} {'max ratio':>11} {'mean ratio':>11} {'time':>7}"
    print(header)
    print("-" * len(header))
    for bound_id, ps in GRID:
        if args.only and bound_id not in args.only:
            continue
        for p in ps:
            out = os.path.join(args.out_dir, f"{bound_id}_p{pnorm_label(p)}.json") if args.out_dir else None
            cfg = CampaignConfig(bound_id, trials=args.trials, p=p, seed=args.seed, threads=args.threads,
                                 output_path=out, keep_trials=out is not None)
            report = run_campaign(cfg)
            write_report(report, cfg)
            s = report["summary"]
            extra = f"  c_hat={s['empirical_c']:.4g}" if "empirical_c" in s else ""
            if s["sub_assertion_failures"]:
                extra += f"  sub={json.dumps(s['sub_assertion_failures'])}"
            print(f"{bound_id:24} {s['p']:>4} {s['trials']:>7} {s['violations']:>5} {s['hypotheses_unmet']:>5} "
                  f"{s['max_slack_ratio']:>11.6g} {s['mean_slack_ratio']:>11.6g} {report['wall_time']:>6.1f}s{extra}")


if __name__ == "__main__":
    main()
