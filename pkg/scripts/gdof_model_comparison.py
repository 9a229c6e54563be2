#!/usr/bin/env python3
"""Tabulate the gDoF curves of the three models (cumulative sharing,
classical interference, broadcast) with empirical slope-fit columns."""

import argparse
import sys

from cifc_cms import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", default="3")
    ap.add_argument("--alpha", default="0:3:0.05")
    ap.add_argument("--snr-db", default="40,50,60,70,80",
                    help="SNR points for the empirical slope fit "
                         "(empty string skips it)")
    ap.add_argument("--out", default="gdof_curves.csv")
    args = ap.parse_args()

    argv = ["gdof-curves",
            "--models", "cms,ifc,bc",
            "--k", args.k,
            "--alpha", args.alpha,
            "--out", args.out]
    if args.snr_db:
        argv += ["--snr-db", args.snr_db]
    return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())
