#!/usr/bin/env python3
"""Regenerate the frozen reference constants used by the test suites.

Every hard-coded expected value in the Rust tests (normal CDF/quantile
anchors, closed-form confidence pairs, analytic bounds, divergences, and the
binary-market pipeline) comes from this script, evaluated with mpmath at 40
decimal digits.  Run it and compare against the constants in the tests when
touching any of the formulas.

    python3 tools/gen_reference_values.py
"""

from mpmath import mp, mpf, sqrt, erfc, erfinv, log, floor, pi, binomial

mp.dps = 40


def ncdf(x):
    return erfc(-mpf(x) / sqrt(2)) / 2


def nppf(p):
    return -sqrt(2) * erfinv(1 - 2 * mpf(p))


def show(label, v, digits=20):
    print(f"{label} = {mp.nstr(v, digits)}")


print("== normal cdf ==")
for x in ["0", "0.1", "0.5", "1", "1.5", "1.96", "2", "2.5758293035489008",
          "3", "4", "5", "6", "8", "-0.5", "-1.96", "-3", "-5", "-8",
          "1.6448536269514722"]:
    show(f"ncdf({x})", ncdf(mpf(x)))

print("== normal quantile ==")
for p in ["1e-12", "1e-9", "1e-6", "0.001", "0.025", "0.05", "0.1", "0.25",
          "0.3", "0.5", "0.7", "0.75", "0.9", "0.95", "0.975", "0.999",
          "0.12345"]:
    show(f"nppf({p})", nppf(mpf(p)))
show("nppf(1-1e-6)", nppf(1 - mpf("1e-6")))
show("nppf(1-1e-9)", nppf(1 - mpf("1e-9")))

print("== coordination confidence pair (beta=2, alpha=0.05) ==")
za = -nppf(mpf("0.05") / 2)
show("z_alpha", za)


def coord(n, beta, sigma, alpha):
    za = -nppf(mpf(alpha) / 2)
    drift = (mpf(beta) - 1) / mpf(sigma) * sqrt((mpf(n) ** 2 - 1) / 12)
    return 1 - ncdf(za - drift), 1 - ncdf(-za - drift)


for sigma in [10, 100]:
    for n in [10, 50, 100, 2000]:
        pl, pu = coord(n, 2, sigma, "0.05")
        show(f"coord n={n} sigma={sigma} p_lower", pl)
        show(f"coord n={n} sigma={sigma} p_upper", pu)
show("ci halfwidth n=100 sigma=100", za * 100 * sqrt(mpf(12) / 9999))

print("== trade upper probability, symmetric rectangle ==")


def trade_sym(n, m, a):
    a = mpf(a)
    miss = 2 * ((2 - a) / 2) ** n - (1 - a) ** n
    return 1 - (1 - miss) ** m


for (n, m) in [(1, 3), (5, 1), (5, 2), (20, 2), (20, 10), (50, 5), (1000, 2)]:
    show(f"trade_sym n={n} m={m} a=0.1", trade_sym(n, m, "0.1"))

print("== trade upper probability, general rectangle ==")


def trade_rect(n, rlo, rhi):
    prod = mpf(1)
    for lo, hi in zip(rlo, rhi):
        lo, hi = mpf(lo), mpf(hi)
        miss = ((2 - lo) / 2) ** n + ((2 - hi) / 2) ** n - ((2 - lo - hi) / 2) ** n
        prod *= 1 - miss
    return 1 - prod


show("trade_rect n=3 rlo=(0.2,0.1) rhi=(0.3,0.4)",
     trade_rect(3, ["0.2", "0.1"], ["0.3", "0.4"]))

print("== location-learning lower bound ==")


def gauss_bound(n, beta, eta):
    return 1 - (1 / (mpf(beta) - 1)) * (sqrt(2 / (pi * n)) + (mpf(beta) + mpf(eta)) / (n + 1))


for n in [10, 100, 1000]:
    show(f"gauss_bound n={n} beta=2 eta=1", gauss_bound(n, 2, 1))

print("== KL divergence (bits) ==")


def kl2(qh, q):
    s = mpf(0)
    for a, b in zip(qh, q):
        a, b = mpf(a), mpf(b)
        if a > 0:
            s += a * log(a / b) / log(2)
    return s


show("kl (1,0)||(3/4,1/4)", kl2(["1", "0"], ["0.75", "0.25"]))
show("kl (0.55,0.45)||(0.75,0.25)", kl2(["0.55", "0.45"], ["0.75", "0.25"]))
show("kl (0.51,0.49)||(0.75,0.25)", kl2(["0.51", "0.49"], ["0.75", "0.25"]))
show("kl (11/20,9/20)||(3/4,1/4)", kl2([mpf(11) / 20, mpf(9) / 20], ["0.75", "0.25"]))

print("== entry threshold on the signal mean (pi_lo=1/4, q_lo=2/3, p=3/4) ==")


def zbar(n, pi_lo, q_lo, p):
    arg = (pi_lo / (1 - pi_lo)) * ((1 - p) / p)
    base = (1 - q_lo) / q_lo
    zs = (1 + log(arg) / log(base) / n) / 2
    return zs, floor(zs * n) / n


for n in [20, 50, 100]:
    zs, fm = zbar(n, mpf(1) / 4, mpf(2) / 3, mpf(3) / 4)
    show(f"zbar n={n}", zs)
    show(f"zbar floor-mean n={n}", fm)
show("log2 9", log(9) / log(2))

print("== composite trade decay rate (base-2 logs, floored counts) ==")


def rn(n):
    l92 = log(9) / log(2)
    kp = floor(n / mpf(2) + l92)
    km = floor(n / mpf(2) - l92)
    if km <= 0 or kp <= 0:
        return None
    lg = lambda x: log(x) / log(2)
    return mpf(3) / 4 * (lg(3 * n) - lg(kp)) + mpf(1) / 4 * (lg(n) - lg(km))


for n in [9, 20, 100, 1000]:
    v = rn(n)
    show(f"r_n n={n}", v)
    show(f"rate-bound n={n}", (n + 1) ** 2 * mpf(2) ** (-n * v))
neg = [n for n in range(20, 10001) if rn(n) <= 0]
print("r_n nonpositive count in [20,1e4]:", len(neg))

print("== binary-market pipeline (v=1, q*=3/4, p=3/4, pi=[1/4,3/4], q=[2/3,1]) ==")


def posterior(pi, q, n, k):
    pi, q = mpf(pi), mpf(q)
    e = n * (2 * mpf(k) / n - 1)
    if q == 1:
        if e > 0:
            r = mpf(0)
        elif e == 0:
            r = mpf(1)
        else:
            return mpf(0)
    else:
        r = ((1 - q) / q) ** e
    return 1 / (1 + (1 - pi) / pi * r)


def weak_enter(n, k, pis, qs, p):
    vals = [posterior(pi, q, n, k) for pi in pis for q in qs]
    return min(vals) < p and max(vals) > p


def pipeline(n, q1):
    pis = [mpf(1) / 4, mpf(3) / 4]
    qs = [mpf(2) / 3, mpf(1)]
    p = mpf(3) / 4
    best = None
    ks = []
    for k in range(n + 1):
        if weak_enter(n, k, pis, qs, p):
            ks.append(k)
            d = kl2([mpf(k) / n, 1 - mpf(k) / n], [q1, 1 - q1])
            best = d if best is None or d < best else best
    return ks, best


def pbar_exact(n, q1, ks):
    return sum(binomial(n, k) * q1 ** k * (1 - q1) ** (n - k) for k in ks)


for n in [20, 50, 100, 200]:
    ks, d = pipeline(n, mpf(3) / 4)
    b = (n + 1) ** 2 * mpf(2) ** (-n * d) if d is not None else mpf(0)
    print(f"  n={n} entry counts: {ks}")
    show(f"  D* n={n}", d)
    show(f"  bound n={n}", b)
    show(f"  exact pbar n={n}", pbar_exact(n, mpf(3) / 4, ks))

print("== posterior spot values ==")
show("posterior(0.5,0.75,n=2,k=2)", posterior("0.5", "0.75", 2, 2))
show("posterior(0.25,2/3,n=20,k=11)", posterior(mpf(1) / 4, mpf(2) / 3, 20, 11))
show("posterior(0.25,2/3,n=20,k=12)", posterior(mpf(1) / 4, mpf(2) / 3, 20, 12))

print("== wide-grid market upper probability at n=200 ==")
pis = [mpf(1) / 1000, mpf(999) / 1000]
qs = [mpf(501) / 1000, mpf(999) / 1000]
p = mpf(3) / 4
ks = [k for k in range(201)
      if (lambda vals: min(vals) < p < max(vals))(
          [posterior(pi, q, 200, k) for pi in pis for q in qs])]
print("  wide-grid entry counts:", len(ks), "min k:", min(ks), "max k:", max(ks))
show("  wide pbar n=200", pbar_exact(200, mpf(3) / 4, ks))
