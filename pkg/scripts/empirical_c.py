"""Largest observed dist / ||C_A - C_Abar||_p for normal companions, by (n, m) and p.

The inequality only asserts that some universal constant exists; this sweep
estimates how large it has to be on the monic-normal-companion family.

    python3 scripts/empirical_c.py --trials 2000
"""
import argparse
from collections import defaultdict

from polyspec.campaign import CampaignConfig, build_instance
from polyspec.bounds import check_polynomial_bdm
from polyspec.genlab import split_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()

    for p in (1, 2, "inf"):
        cfg = CampaignConfig("poly-bdm", trials=args.trials, p=p, seed=args.seed)
        best = defaultdict(float)
        for t in range(args.trials):
            inputs, params = build_instance(cfg.bound_id, cfg.gen, cfg.p, split_seed(cfg.seed, t))
            rep = check_polynomial_bdm(*inputs, params["p"])
            key = (rep.constants["n"], rep.constants["m"])
            best[key] = max(best[key], rep.constants["empirical_c"])
        print(f"p = {p}: overall c_hat = {max(best.values()):.4f}")
        for (n, m), c in sorted(best.items()):
            print(f"   n={n} m={m} mn={n * m:2d}  c_hat={c:.4f}")


if __name__ == "__main__":
    main()
