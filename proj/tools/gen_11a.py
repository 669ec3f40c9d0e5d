#!/usr/bin/env python3
"""Write the q-expansion of eta(z)^2 eta(11z)^2 as a coefficient file.

Plain integer arithmetic: expand prod (1 - q^n) and prod (1 - q^{11n}) by
repeated multiplication, independent of the pentagonal shortcut used in the
library, so the file doubles as a cross-check.
"""
import argparse


def eta_product(count):
    N = count  # coefficients of q^1..q^N, i.e. q * series up to degree N-1
    series = [0] * N
    series[0] = 1
    for n in range(1, N):
        for k in (n, n, 11 * n, 11 * n):
            if k >= N:
                continue
            for i in range(N - 1, k - 1, -1):
                series[i] -= series[i - k]
    return series


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=4000)
    ap.add_argument("--out", default="data/11a.coeffs")
    args = ap.parse_args()
    a = eta_product(args.count)
    with open(args.out, "w") as fh:
        fh.write("# type=holomorphic\n# level=11\n# weight=2\n")
        fh.write("# source=tools/gen_11a.py (eta(z)^2 eta(11z)^2, exact integer expansion)\n")
        for n, v in enumerate(a, start=1):
            fh.write(f"{n} {v}\n")


if __name__ == "__main__":
    main()
