"""Independent oracles for the frozen constants in the test-suite.

Nothing here imports slowdec.  Zero sets are enumerated directly and sums
are taken with mpmath or math.fsum.  Run ``python tests/oracles/derive.py``
to reprint every constant.
"""

import math

import mpmath as mp

mp.mp.dps = 40


def log_s0(z, k_max=200):
    """ln|s_0(z)| by the partial product up to k_max."""
    z = mp.mpc(z)
    return mp.fsum(mp.log(abs(1 - z * z / mp.mpf(4) ** k)) for k in range(1, k_max + 1))


def log_phi0(z):
    z = mp.mpc(z)
    return mp.log(abs(mp.sin(mp.pi * z))) - mp.log(abs(mp.pi * z)) - log_s0(z)


def integers_without_powers_of_two(radius):
    """Nonzero integers up to radius with +-2^k (k >= 1) removed."""
    powers = set()
    p = 2
    while p <= radius:
        powers.add(p)
        p *= 2
    pos = [j for j in range(1, int(radius) + 1) if j not in powers]
    return pos + [-j for j in pos]


def cond2_bruteforce(zeros, A, x):
    """Normalized cond-2 integral; every zero's contribution written out."""
    a = A * math.log(x)
    b = x * math.log(x)
    w = complex(x, a)
    clip = lambda r: min(max(r, a), b)
    terms = [math.log(clip(abs(lam - w))) - math.log(clip(abs(lam))) for lam in zeros]
    return abs(math.fsum(terms)) / a


def lemma3_bruteforce(zeros, x, T):
    a = x * math.log(x)
    clip = lambda r: min(max(r, a), T)
    return math.fsum(2 * math.log(clip(l)) - math.log(clip(l - x)) - math.log(clip(l + x)) for l in zeros if l > 0)


def lemma4_bruteforce(zeros, x, A):
    y = A * math.log(x)
    b = x * math.log(x)
    tot = []
    for l in zeros:
        d = abs(l - x)
        tot.append(math.log(max(math.hypot(d, y), b)) - math.log(max(d, b)))
    return math.fsum(tot)


if __name__ == "__main__":
    print("ln phi0(0.5)       =", mp.nstr(log_phi0(0.5), 17))
    print("ln s0(0.5)         =", mp.nstr(log_s0(0.5), 17))
    print("ln phi0(100.5)     =", mp.nstr(log_phi0(100.5), 17))
    print("ln phi0(3+2i)      =", mp.nstr(log_phi0(mp.mpc(3, 2)), 17))
    print("ln phi0(1000.25)   =", mp.nstr(log_phi0(1000.25), 17))
    print("ln|sin(pi z)/(pi z)| at 10+5i =",
          mp.nstr(mp.log(abs(mp.sin(mp.pi * mp.mpc(10, 5)) / (mp.pi * mp.mpc(10, 5)))), 17))
    for x in (1e3, 1e4, 1e5):
        zs = integers_without_powers_of_two(x * math.log(x) + abs(complex(x, 5 * math.log(x))) + 1)
        print(f"cond2 no-powers A=5 x={x:g}:", repr(cond2_bruteforce(zs, 5.0, x)))
    zs = list(range(1, int(1e4 * math.log(1e4) + abs(complex(1e4, 5 * math.log(1e4)))) + 2))
    zs = zs + [-j for j in zs]
    print("cond2 integers A=5 x=1e4:", repr(cond2_bruteforce(zs, 5.0, 1e4)))
    for x in (1e3, 1e4):
        # zeros up to T + x reach into the integration range
        ints = list(range(1, int(1e6 + x) + 2))
        ints = ints + [-j for j in ints]
        print(f"lemma3 integers x={x:g} T=1e6:", repr(lemma3_bruteforce(ints, x, 1e6)))
    ints = list(range(1, 100_001))
    ints = ints + [-j for j in ints]
    for A in (1, 2, 4, 8):
        print(f"lemma4 integers x=1e3 A={A} R=1e5:", repr(lemma4_bruteforce(ints, 1e3, A)))
    # counting: nu(x) for lambda_j = j + ln(1 + j^2), j >= 1
    for x in (1e2, 1e3, 1e4, 1e5):
        n = sum(1 for j in range(1, int(x) + 1) if j + math.log1p(j * j) <= x)
        print(f"perturbed nu({x:g}) = {n}; nu - x + ln(1+x^2) = {n - x + math.log1p(x * x):.6f}")
