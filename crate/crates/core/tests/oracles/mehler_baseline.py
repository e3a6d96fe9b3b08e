"""Regenerates data/mehler_baseline.json: semigroup defects of the
Mittag-Leffler Mehler evolution, E_beta by its power series at 50 digits."""

import json
import sys

import mpmath as mp

mp.mp.dps = 50


def ml(beta, z):
    z = mp.mpf(z)
    s, n = mp.mpf(0), 0
    while True:
        term = z**n / mp.gamma(beta * n + 1)
        s += term
        if n > 10 and abs(term) < mp.mpf(10) ** -45:
            return s
        n += 1


def defect(beta, t, s, q):
    a = lambda u: -mp.mpf(1) / 2 * (1 - mp.exp(-2 * u)) * q
    lhs = ml(beta, a(s)) * ml(beta, a(t) * mp.exp(-2 * s))
    return abs(lhs - ml(beta, a(t + s)))


def main():
    beta, q = mp.mpf(1) / 2, mp.mpf(1)
    grid = [(0.5, 0.5), (0.25, 0.5), (0.5, 0.25), (1.0, 1.0), (0.1, 2.0), (2.0, 0.1), (0.0, 0.7), (0.7, 0.0)]
    rows = [{"t": t, "s": s, "defect": float(defect(beta, mp.mpf(t), mp.mpf(s), q))} for t, s in grid]
    json.dump({"beta": 0.5, "q": 1.0, "rows": rows}, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
