"""Reference values for the special-function unit tests.

Independent of the C++ code paths: high-precision Taylor sums, Talbot Laplace
inversion of s^(b-1)/(s^b+1), the erfc identity for b=1/2 and the Airy form of
M_{1/3}. Run with `python3 specfun_oracle.py` and paste into test_specfun.cpp.
"""
import mpmath as mp


def ml_series(beta, gam, z, dps=60):
    # enough digits to survive the cancellation of the alternating sum
    with mp.workdps(dps):
        # parameters parsed from decimal strings: float products beta*n would be
        # amplified by the cancellation
        beta, gam, z = mp.mpf(str(beta)), mp.mpf(str(gam)), mp.mpf(str(z))
        total, n = mp.mpf(0), 0
        peak = mp.mpf(0)
        small = 0
        while True:
            term = z**n * mp.rgamma(beta * n + gam)
            total += term
            peak = max(peak, abs(term))
            small = small + 1 if abs(term) < mp.mpf(10) ** (-dps + 5) * peak else 0
            if n > 10 and small >= 5 and n > 2 * abs(z) ** (1 / beta):
                return +total
            n += 1


def ml_neg_talbot(beta, x):
    # E_beta(-t^beta) has Laplace transform s^(beta-1)/(s^beta+1)
    with mp.workdps(40):
        t = mp.mpf(x) ** (1 / mp.mpf(beta))
        return mp.invertlaplace(lambda s: s ** (beta - 1) / (s**beta + 1), t, method="talbot")


def mwright_series(beta, x, dps=80):
    with mp.workdps(dps):
        beta, x = mp.mpf(str(beta)), mp.mpf(str(x))
        total = mp.mpf(0)
        small = 0  # near-pole terms are tiny but isolated; require a run
        for n in range(0, 20000):
            term = (-x) ** n / mp.factorial(n) * mp.rgamma(1 - beta - beta * n)
            total += term
            small = small + 1 if abs(term) < mp.mpf(10) ** (-dps + 10) else 0
            if n > 20 and small >= 5 and n > 3 * x:
                break
        return +total


def main():
    mp.mp.dps = 30
    print("// E_{1/2}(-1) = e erfc(1)")
    print(mp.nstr(mp.e * mp.erfc(1), 17))
    print("// E_{1/2}(-x) = exp(x^2) erfc(x)")
    for x in [0.5, 3, 7, 12, 40]:
        print(x, mp.nstr(mp.exp(mp.mpf(x) ** 2) * mp.erfc(x), 17))
    print("// E_b(-x) by Talbot inversion / high precision series")
    for b in [0.25, 0.75, 0.9]:
        for x in [0.5, 2, 5, 8, 20, 60]:
            tal = ml_neg_talbot(b, x)
            ser = ml_series(b, 1, -x, dps=int(60 + x ** (1 / b))) if x ** (1 / b) <= 700 else None
            print(b, x, mp.nstr(tal, 17), "" if ser is None else mp.nstr(ser, 17))
    print("// E_{b,g}(z) series")
    for b, g, z in [(0.6, 0.6, -0.7), (0.3, 0.3, -2), (0.8, 0.8, 1.5), (1.5, 1, -3), (1.5, 1, -12), (0.7, 1.3, 2.0),
                    (0.6, 0.6, -6), (0.6, 0.6, -15), (1.8, 1, -20), (0.5, 1, 4.5), (0.75, 1, 9.0)]:
        print(b, g, z, mp.nstr(ml_series(b, g, z, dps=int(60 + abs(z) ** (1 / b))), 17))
    print("// E_b(z) complex")
    for b, z in [(0.5, mp.mpc(1, 2)), (0.8, mp.mpc(-2, 1)), (0.3, mp.mpc(0.5, -0.5))]:
        with mp.workdps(60):
            s = mp.mpc(0)
            for n in range(0, 400):
                s += z**n * mp.rgamma(b * n + 1)
        print(b, z, mp.nstr(s, 17))
    print("// M-Wright")
    for x in [0.5, 1, 3]:
        print("1/3", x, mp.nstr(3 ** (mp.mpf(2) / 3) * mp.airyai(x / 3 ** (mp.mpf(1) / 3)), 17))
    for b, xs in [(0.25, [0.3, 1.5, 3, 6]), (0.75, [0.3, 1.5, 3, 6]), (0.9, [0.3, 1.5])]:
        for x in xs:
            print(b, x, mp.nstr(mwright_series(b, x, dps=int(60 + 2 * x ** (1 / (1 - b)))), 17))


if __name__ == "__main__":
    main()
