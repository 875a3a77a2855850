"""Regenerate tests/oracle_values.py from mpmath at 60 significant digits.

Run with ``python3 tests/regenerate_oracles.py``; the output is committed so
the test suite itself does not spend time in high-precision arithmetic.
"""
import os
import pprint

from mpmath import mp, mpf

mp.dps = 60

QUARTER = {k: mpf(k) / 4 for k in range(1, 8)}


def z_ref(i, u):
    u = mpf(u)
    v = u ** 4 / 256
    if i == 1:
        return mp.hyper([-QUARTER[1]], [QUARTER[1], QUARTER[2], QUARTER[3]], v)
    if i == 2:
        return u
    if i == 3:
        return u ** 2 * mp.hyper([QUARTER[1]], [QUARTER[3], QUARTER[5], QUARTER[6]], v)
    return u ** 3 * mp.hyper([QUARTER[2]], [QUARTER[5], QUARTER[6], QUARTER[7]], v)


R2 = mp.sqrt(2)
D = [[0, 1 / R2, -1, 1 / R2], [1, -1 / R2, 0, 1 / R2],
     [0, 1 / R2, 1, 1 / R2], [1, 1 / R2, 0, -1 / R2]]
W = [1 / mp.gamma(QUARTER[5]), mpf(1), 1 / (2 * mp.gamma(QUARTER[3])), 1 / (6 * mp.sqrt(mp.pi))]


def y_ref(i, t, x, B=1, order=0):
    s = (mpf(B) * t) ** mpf(0.25)

    def prof(xx):
        u = xx / s
        return s * sum(D[i - 1][j] * W[j] * z_ref(j + 1, u) for j in range(4))
    return mp.diff(prof, mpf(x), order) if order else prof(mpf(x))


def dawson_ref(x):
    x = mpf(x)
    return mp.sqrt(mp.pi) / 2 * mp.exp(-x * x) * mp.erfi(x)


def f_ref(w):
    return (1 - mp.exp(-w ** 4)) / w ** 2


def g_ref(w):
    return 2 * dawson_ref(w * w) / w ** 2


def cosine_ref(func, u):
    u = mpf(u)
    return mp.quadosc(lambda w: func(w) * mp.cos(u * w), [0, mp.inf], omega=u)


def main():
    out = {}
    out["GAMMA"] = {k: float(mp.gamma(QUARTER[k])) for k in range(1, 8)}
    out["DAWSON"] = {x: float(dawson_ref(x)) for x in
                     (0.0, 0.05, 0.1, 0.5, 1.0, 1.5, 2.0, 3.5, 5.0, 7.0, 10.0, 30.0, -1.2)}
    pfq_cases = {
        ("1/3", "3/2", 2.5): ([mpf(1) / 3], [mpf(3) / 2], 2.5),
        ("", "4/3", -7.0): ([], [mpf(4) / 3], -7.0),
        ("1/2,2", "3/4,5/4,3", 3.0): ([mpf(1) / 2, 2], [mpf(3) / 4, mpf(5) / 4, 3], 3.0),
        ("-1/4", "1/4,1/2,3/4", 40.0): ([-QUARTER[1]], [QUARTER[1], QUARTER[2], QUARTER[3]], 40.0),
        ("-3", "1/2", 1.7): ([-3], [mpf(1) / 2], 1.7),
    }
    out["PFQ"] = {k: float(mp.hyper(a, b, nu)) for k, (a, b, nu) in pfq_cases.items()}
    z_vals = {}
    for i in range(1, 5):
        for order in range(5):
            for u in (-3.5, 0.3, 1.0, 2.5, 4.0, 6.0, 8.0, 11.0):
                z_vals[(i, order, u)] = float(mp.diff(lambda v: z_ref(i, v), mpf(u), order))
    out["Z"] = z_vals
    y_vals = {}
    for (t, x, B) in ((1.0, 0.5, 1.0), (1.0, 2.0, 1.0), (0.3, 1.0, 1.0), (5.0, 3.0, 2.0),
                      (1.0, 7.0, 1.0), (1.0, 10.0, 1.0), (2.0, 16.0, 0.5), (1.0, 25.0, 1.0)):
        for i in (1, 2):
            for order in range(3):
                y_vals[(i, order, t, x, B)] = float(y_ref(i, t, x, B, order))
        for i in (3, 4):
            y_vals[(i, 0, t, -x, B)] = float(y_ref(i, t, -x, B))
    out["Y"] = y_vals
    out["COSINE_F"] = {u: float(cosine_ref(f_ref, u)) for u in (0.5, 2.0, 5.0, 9.0)}
    out["COSINE_G"] = {u: float(cosine_ref(g_ref, u)) for u in (0.5, 2.0, 5.0, 9.0)}
    deriv = {}
    for k in range(5):
        for w in (0.3, 1.0, 2.0, 3.5, 6.0):
            deriv[("f", k, w)] = float(mp.diff(f_ref, mpf(w), k))
            deriv[("g", k, w)] = float(mp.diff(g_ref, mpf(w), k))
    out["INTEGRAND"] = deriv
    g14, g34 = mp.gamma(QUARTER[1]), mp.gamma(QUARTER[3])
    out["TAYLOR_TILDE1"] = [float(-2 / mp.pi * g34), 1.0, float(-g14 / (4 * mp.pi)), 0.0]

    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "oracle_values.py")
    with open(path, "w") as fh:
        fh.write('"""Frozen mpmath reference values; regenerate with regenerate_oracles.py."""\n\n')
        for name, value in out.items():
            fh.write(f"{name} = {pprint.pformat(value, width=100)}\n\n")


if __name__ == "__main__":
    main()
