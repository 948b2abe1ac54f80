"""Write the long-format curves (preset models + 3GPP A/B) used to redraw the blockage-gain vs frequency figure."""

import argparse
import sys

from blockage_kit.analysis import emit_plot_data
from blockage_kit.traceproc import PAPER_DISTANCES_M, PAPER_FREQS_GHZ


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    text = emit_plot_data(PAPER_FREQS_GHZ, PAPER_DISTANCES_M)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
