"""Independent high-precision values frozen into the Rust tests.

Run with `python3 oracles.py`; needs mpmath.
"""
from fractions import Fraction
from itertools import product

from mpmath import mp, mpf, log, floor, power

mp.dps = 50


def h(q):
    q = mpf(q)
    return -q * log(q, 2) - (1 - q) * log(1 - q, 2)


def key_length(n, qber, mu, p_fail, eps_bar, eps_cor):
    leak = mpf("1.1") * n * h(qber)
    cost = log(2 * mpf(p_fail) / (mpf(eps_bar) ** 2 * mpf(eps_cor)), 2)
    v = n * (1 - h(mpf(qber) + mpf(mu))) - leak - cost
    return max(0, int(floor(v)))


def toeplitz(k, seed, out_len):
    n = len(k)
    return "".join(
        str(sum(int(seed[i + n - 1 - j]) & int(k[j]) for j in range(n)) % 2)
        for i in range(out_len)
    )


def iid_delta(bias, bits):
    p1 = Fraction(1, 2) + Fraction(bias)
    u = Fraction(1, 2**bits)
    total = Fraction(0)
    for x in product((0, 1), repeat=bits):
        ones = sum(x)
        total += abs(p1**ones * (1 - p1) ** (bits - ones) - u)
    return total / 2


print("h(0.11)                =", h("0.11"))
print("10^(-14/3)             =", power(10, mpf(-14) / 3))
print("log10 2^-10000         =", -10000 * log(2, 10))
print("leaked bits 1e4 / f    =", 10000 / log(100, 2))
print("key length ref(1e6)    =", key_length(10**6, "0.02", "0.005", "1e-10", "1e-10", "1e-15"))
print("toeplitz(101, 0110, 2) =", toeplitz("101", "0110", 2))
print("spike delta l=8 2^-4   =", mpf(2) ** -4 * (1 - mpf(2) ** -8))
print("iid delta 1e-4, 8 bits =", mpf(iid_delta("0.0001", 8).numerator) / iid_delta("0.0001", 8).denominator)
