"""Independent high-precision evaluations of the Gaussian bounds (mpmath)."""
import mpmath

mpmath.mp.dps = 40


def C(x):
    return mpmath.log(1 + mpmath.mpf(x), 2) / 2


def gpc(p1, p2, k1, k2, a, rho=0):
    s = 1 - mpmath.mpf(rho) ** 2
    return {"r1": C(mpmath.mpf(p1) / (k2 + 1)), "r2": C(s * p2),
            "re2": C(s * p2) - C(s * mpmath.mpf(a) ** 2 * p2)}


def spc(p1, p2, k1, k2, a, b, rho=1, rho1=0, rho2=0):
    p1, p2, k1, k2, a, b = (mpmath.mpf(v) for v in (p1, p2, k1, k2, a, b))
    pp = rho * p2
    num = p1 + a * a * p2 + k1 + k2 + 1 + 2 * a * rho1 * mpmath.sqrt(p1 * p2) \
        + 2 * a * rho2 * mpmath.sqrt(p2 * k1)
    return {
        "r1": C(num / (k1 * (a * a * pp + k2 + 1))),
        "r2": C(pp),
        "sum": C(b * b * p1 + p2 + k1 + 2 * b * rho1 * mpmath.sqrt(p1 * p2)
                 + 2 * rho2 * mpmath.sqrt(p2 * k1)) - mpmath.log(k1, 2) / 2,
        "re2": C(pp) - C(a * a * pp / (k2 + 1)),
    }


def spc_perfect(p1, p2, k1, k2, a, b):
    p1, p2, k1, k2, a, b = (mpmath.mpf(v) for v in (p1, p2, k1, k2, a, b))
    leak = a * a * p2
    r2 = C(p2) - C(leak / (k2 + 1))
    return {"r1": C((p1 + leak + k1 + k2 + 1) / (k1 * (leak + k2 + 1))), "r2": r2,
            "sum": C(b * b * p1 + p2 + k1) - mpmath.log(k1, 2) / 2, "re2": r2}


def outer_strong(p1, p2, a, b, rho=0):
    p1, p2, a, b = (mpmath.mpf(v) for v in (p1, p2, a, b))
    cross = 2 * rho * mpmath.sqrt(p1 * p2)
    return {"r2": C((1 - mpmath.mpf(rho) ** 2) * p2),
            "sum_rx1": C(p1 + a * a * p2 + a * cross),
            "sum_rx2": C(b * b * p1 + p2 + b * cross), "re2": mpmath.mpf(0)}


def crossover(p1, p2, k1, k2):
    p1, p2, k1, k2 = (mpmath.mpf(v) for v in (p1, p2, k1, k2))
    num = (k2 + 1) * (p1 + k1 + k2 + 1) - p1 * k1 * (k2 + 1)
    den = p1 * p2 * k1 - p2 * (k2 + 1)
    return mpmath.sqrt(num / den)


def brute_mi(names, probs, a, b, c=()):
    """I(a; b | c) by explicit enumeration of cells into dictionaries (mpmath sums)."""
    import numpy as np
    from collections import defaultdict

    idx = {n: i for i, n in enumerate(names)}
    a, b, c = ([idx[n] for n in (s.split(",") if isinstance(s, str) else s) if n]
               for s in (a, b, c))
    pabc, pac, pbc, pc = (defaultdict(lambda: mpmath.mpf(0)) for _ in range(4))
    probs = np.asarray(probs)
    for cell in np.ndindex(*probs.shape):
        p = mpmath.mpf(float(probs[cell]))
        if p == 0:
            continue
        ka, kb, kc = (tuple(cell[i] for i in s) for s in (a, b, c))
        pabc[ka, kb, kc] += p
        pac[ka, kc] += p
        pbc[kb, kc] += p
        pc[kc] += p
    total = mpmath.mpf(0)
    for (ka, kb, kc), p in pabc.items():
        total += p * mpmath.log(p * pc[kc] / (pac[ka, kc] * pbc[kb, kc]), 2)
    return total
