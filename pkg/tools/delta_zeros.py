"""Zeros of L(s, Delta) on the critical line, computed with mpmath.

Lambda(s) = (2 pi)^-s Gamma(s) L(s) equals the rapidly convergent sum
sum tau(n) [ (2 pi n)^-s Gamma(s, 2 pi n) + (2 pi n)^(s-12) Gamma(12-s, 2 pi n) ],
which is real on Re s = 6.  Sign changes are bracketed on a grid and refined
with the Illinois method.  The count is checked against theta(T)/pi + 1.

    python tools/delta_zeros.py --T 130 --out tests/data/delta_zeros.txt
"""

import argparse

import mpmath as mp

from lowzero.explicit_formula import ramanujan_tau


def scaled_lambda(t, tau):
    mp.mp.dps = int(0.7 * float(t)) + 25
    s = mp.mpf(6) + 1j * mp.mpf(t)
    total = mp.mpf(0)
    for n in range(1, int(float(t) / 4) + 13):
        x = 2 * mp.pi * n
        total += tau[n] * (x ** (-s) * mp.gammainc(s, x) + x ** (s - 12) * mp.gammainc(12 - s, x))
    return total.real * mp.exp(mp.pi * t / 2)


def theta(T):
    mp.mp.dps = 30
    return mp.im(mp.loggamma(6 + 1j * mp.mpf(T))) - T * mp.log(2 * mp.pi)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=float, default=130.0)
    ap.add_argument("--step", type=float, default=0.2)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    tau = ramanujan_tau(int(args.T / 4) + 20)
    f = lambda t: scaled_lambda(t, tau)
    zeros = []
    t, v = args.step, f(args.step)
    while t < args.T:
        t2 = t + args.step
        v2 = f(t2)
        if v * v2 < 0:
            z = mp.findroot(f, (t, t2), solver="illinois", tol=1e-20)
            zeros.append(float(z))
        t, v = t2, v2
    expected = float(theta(args.T) / mp.pi + 1)
    with open(args.out, "w") as fh:
        fh.write(f"# {len(zeros)} zeros of L(s, Delta) with 0 < gamma < {args.T}; theta(T)/pi + 1 = {expected:.2f}\n")
        for z in zeros:
            fh.write(f"{z:.12f}\n")
    print(len(zeros), expected)


if __name__ == "__main__":
    main()
