"""Monte Carlo spread of ABG parameter estimates on the 216-sample design.

Fits preset ABG + N(0, 6.17^2) data for many seeds and prints the empirical
99% half-widths of the gamma and alpha errors next to the analytic OLS
standard errors.  These are the bounds frozen into tests/test_fitting.py.
"""

import argparse

import numpy as np

from blockage_kit.bgmodels import PAPER_ABG, BgModel
from blockage_kit.fitting import design_matrix, fit
from blockage_kit.traceproc import SynthGrid, synth_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=2000)
    ap.add_argument("--sigma", type=float, default=6.17)
    args = ap.parse_args()

    truth = BgModel(PAPER_ABG, args.sigma)
    err = np.empty((args.seeds, 2))
    sig = np.empty(args.seeds)
    for s in range(args.seeds):
        r = fit("abg", synth_dataset(truth, np.random.default_rng(s)))
        err[s] = (r.params.gamma - PAPER_ABG.gamma, r.params.alpha - PAPER_ABG.alpha)
        sig[s] = r.sigma_db

    data = synth_dataset(BgModel(PAPER_ABG), np.random.default_rng(0))
    X = design_matrix("abg", data.f, data.d)
    cov = args.sigma**2 * np.linalg.inv(X.T @ X)
    se_alpha, se_gamma = np.sqrt(cov[0, 0]), np.sqrt(cov[2, 2])

    print(f"grid size            : {len(SynthGrid())}")
    print(f"gamma  se={se_gamma:.4f}  emp sd={err[:, 0].std():.4f}  q99(|err|)={np.quantile(abs(err[:, 0]), 0.99):.3f}"
          f"  P(|err|<=0.3)={np.mean(abs(err[:, 0]) <= 0.3):.3f}")
    print(f"alpha  se={se_alpha:.4f}  emp sd={err[:, 1].std():.4f}  q99(|err|)={np.quantile(abs(err[:, 1]), 0.99):.3f}"
          f"  P(|err|<=1.0)={np.mean(abs(err[:, 1]) <= 1.0):.3f}")
    print(f"sigma_hat within 15%: {np.mean(abs(sig - args.sigma) <= 0.15 * args.sigma):.3f}")


if __name__ == "__main__":
    main()
