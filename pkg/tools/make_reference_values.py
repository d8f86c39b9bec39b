"""Regenerate tests/data/reference_values.json with an independent high-precision route.

Every [frozen] number the fast float implementation is tested against comes from
here: mpmath tanh-sinh quadrature (arbitrary precision, endpoint-singularity
aware) plus bracketing root solves.  Nothing in src/ is imported, so the two
routes share no code.

Slow (several minutes).  Run from the repository root:

    python tools/make_reference_values.py
"""

import json
import pathlib
import time

from mpmath import exp, findroot, gamma, inf, mp, mpf, quad

mp.dps = 35

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "reference_values.json"

LAM_GRID = ("0.05", "0.1", "0.25", "0.4", "0.45")
SIGMA_GRID = ("0.3", "0.5", "0.7")


def moment(lam, x, poly):
    """integral_0^inf y^(-2 lam) p(y - x) exp(-(y - x)^2 / 2) dy.

    The weight singularity at 0 is removed by the exact change of variables
    y = s^(1/(1-2 lam)) on [0, 1] (tanh-sinh alone loses accuracy once
    2 lam approaches 1); beyond 1 the integrand is smooth.
    """
    lam = mpf(lam)
    x = mpf(x)
    c = [mpf(ci) for ci in poly] + [mpf(0)] * (3 - len(poly))
    alpha = 1 / (1 - 2 * lam)

    def p_gauss(t):
        return (c[0] + (c[1] + c[2] * t) * t) * exp(-t * t / 2)

    def f_sub(s):
        return p_gauss(s ** alpha - x) * alpha

    def f(y):
        return y ** (-2 * lam) * p_gauss(y - x)

    head = quad(f_sub, [mpf(0), mpf(1)], maxdegree=10)
    pts = [mpf(1)]
    if x > 2:
        pts.append(x)
    pts.append(max(mpf(14), x + 12))
    pts.append(inf)
    return head + quad(f, pts, maxdegree=10)


def p0(lam, x):
    return moment(lam, x, (1,))


def d2(lam, x):
    return moment(lam, x, (-1, 0, 1))


def x1_of(lam):
    f = lambda u: d2(lam, u)
    return findroot(f, (mpf(-1) + mpf("1e-7"), mpf("-1e-7")), solver="anderson", tol=mpf("1e-20"))


def x2_of(lam):
    f = lambda u: d2(lam, u)
    lo, hi = mpf(1), mpf(2)
    while f(hi) <= 0:
        lo, hi = hi, hi * 2
        if hi > 64:
            raise RuntimeError("no bracket for the upper inflection point")
    return findroot(f, (lo, hi), solver="anderson", tol=mpf("1e-20"))


def z_of(lam, x1, x2):
    f = lambda u: d2(lam, u) + d2(lam, -u)
    return findroot(f, (-x1 * (1 + mpf("1e-12")), x2), solver="anderson", tol=mpf("1e-20"))


def z2k_of(lam, k, x1, x2):
    f = lambda u: k * d2(lam, u) + d2(lam, -u)
    return findroot(f, (-x1 * (1 + mpf("1e-12")), x2), solver="anderson", tol=mpf("1e-20"))


def sigma_of(lam):
    x1 = x1_of(lam)
    x2 = x2_of(lam)
    z = z_of(lam, x1, x2)
    return x1, x2, z, -x1 / z


def lambda_of_sigma(sig):
    sig = mpf(sig)

    def g(lam):
        return sigma_of(lam)[3] - sig

    return findroot(g, (mpf("0.02"), mpf("0.48")), solver="anderson", tol=mpf("1e-18"))


def mu_pair(lam, sig, z):
    bp = sig * z
    a, b = p0(lam, bp), p0(lam, -bp)
    c, d = d2(lam, bp), d2(lam, -bp)
    s = p0(lam, z) + p0(lam, -z)
    den = b * c - a * d
    return c * s / den, -d * s / den


def main():
    t0 = time.time()
    out = {}

    lam = mpf("0.25")
    phi0_closed = 2 ** (-lam - mpf(1) / 2) * gamma(mpf(1) / 2 - lam)
    d1_closed = 2 ** (-lam) * gamma(1 - lam)
    phi0_quad = p0(lam, 0)
    print("identity check |closed - quad| =", abs(phi0_closed - phi0_quad))
    assert abs(phi0_closed - phi0_quad) < mpf("1e-18")
    out["phi_identities"] = {
        "lam": 0.25,
        "phi0": float(phi0_closed),
        "d1_0": float(d1_closed),
    }

    cps = {}
    for ls in LAM_GRID:
        x1, x2, z, sig = sigma_of(mpf(ls))
        cps[ls] = {
            "x1": float(x1),
            "x2": float(x2),
            "z": float(z),
            "sigma_lambda": float(sig),
        }
        print(f"lam={ls}: x1={float(x1):.12f} x2={float(x2):.12f} "
              f"z={float(z):.12f} sigma={float(sig):.12f}  [{time.time()-t0:.0f}s]")
    out["critical_points"] = cps

    x1_25 = mpf(cps["0.25"]["x1"])
    x2_25 = mpf(cps["0.25"]["x2"])
    z25 = z2k_of(mpf("0.25"), mpf(3), x1_of(mpf("0.25")), x2_of(mpf("0.25")))
    out["z2_diag"] = {"lam": 0.25, "k": 3.0, "value": float(z25)}
    print("z2(k=3) =", float(z25))

    lam_sig = {}
    for ss in SIGMA_GRID:
        val = lambda_of_sigma(ss)
        lam_sig[ss] = float(val)
        print(f"sigma={ss}: lambda_sigma={float(val):.12f}  [{time.time()-t0:.0f}s]")
    out["lambda_sigma"] = lam_sig

    # glued-solution coefficients slightly inside the solvable range
    lam = mpf("0.25")
    sig025 = mpf(cps["0.25"]["sigma_lambda"])
    sig_test = sig025 + mpf("0.05")
    _, _, z, _ = sigma_of(lam)
    mu1, mu2 = mu_pair(lam, sig_test, z)
    out["mu_lam025"] = {"sigma": float(sig_test), "mu1": float(mu1), "mu2": float(mu2)}
    print("mu1, mu2 =", float(mu1), float(mu2))

    # lambda_sigma solution data for sigma = 0.5
    ls = mpf(lam_sig["0.5"])
    x1, x2, z, _ = sigma_of(ls)
    mu1p = (p0(ls, z) + p0(ls, -z)) / p0(ls, x1)
    out["p_sigma_05"] = {
        "lambda": float(ls),
        "mu1": float(mu1p),
        "P0": float(2 * p0(ls, 0)),
        "P1": float(mu1p * p0(ls, -1)),
    }
    print("P_sigma(0.5):", out["p_sigma_05"])

    spots = []
    for (ls_, xs_, poly) in (
        ("0.3", "2", (-1, 0, 1)),
        ("0.1", "-2", (0, 1)),
        ("0.45", "5", (1,)),
        ("0.25", "0.5", (1,)),
    ):
        v = moment(mpf(ls_), mpf(xs_), poly)
        spots.append({"lam": float(mpf(ls_)), "x": float(mpf(xs_)),
                      "poly": list(poly), "value": float(v)})
    out["moment_spots"] = spots

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {OUT} after {time.time()-t0:.0f}s")


if __name__ == "__main__":
    main()
