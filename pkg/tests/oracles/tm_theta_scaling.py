"""Brute-force oracle for the scaled Thue-Morse frequency set.

Counts every factor of length <= 16 on the 2**22 prefix of Thue-Morse,
snaps the empirical frequency to the nearest fraction with denominator
<= 200 and prints freq * 2**ceil(log2 n) for cutoffs 12 and 16.

Shares no code with the package. Run once; results are frozen into
tests/test_acceptance.py.
"""
from fractions import Fraction

import numpy as np

LOG_N = 22


def thue_morse(log_n):
    x = np.zeros(1, dtype=np.int64)
    for _ in range(log_n):
        x = np.concatenate([x, 1 - x])
    return x


def scaled_set(x, max_len):
    n_total = len(x)
    out = set()
    for n in range(1, max_len + 1):
        codes = np.zeros(n_total - n + 1, dtype=np.int64)
        for j in range(n):
            codes = codes * 2 + x[j:n_total - n + 1 + j]
        values, counts = np.unique(codes, return_counts=True)
        k = (n - 1).bit_length()  # min k with n <= 2**k
        for c in counts:
            emp = c / (n_total - n + 1)
            snapped = Fraction(emp).limit_denominator(200)
            assert abs(float(snapped) - emp) < 1e-5, (n, emp, snapped)
            out.add(snapped * 2 ** k)
    return out


if __name__ == "__main__":
    x = thue_morse(LOG_N)
    s12 = scaled_set(x, 12)
    s16 = scaled_set(x, 16)
    print("cutoff 12:", len(s12), sorted(s12))
    print("cutoff 16:", len(s16), sorted(s16))
    print("equal:", s12 == s16)
    for c in (2, 4, 8):
        print("cutoff", c, len(scaled_set(x, c)))
