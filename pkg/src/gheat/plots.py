"""Headless figure rendering for the CLI report path.

Each function takes already-computed rows (the same data written to the
delimited output) and saves one PNG next to it.  Rendering is strictly
optional: nothing else in the package imports matplotlib.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_phi_plot(rows, path):
    """Curves of phi and its first two derivatives over the x sample."""
    xs = [r["x"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for key, style in (("phi", "-"), ("d1", "--"), ("d2", ":")):
        ax.plot(xs, [r[key] for r in rows], style, label=key)
    ax.axhline(0.0, color="0.7", lw=0.8)
    ax.set_xlabel("x")
    ax.legend()
    ax.set_title("special function and derivatives")
    return _finish(fig, path)


def save_constants_plot(rows, path):
    """sigma(lambda) over a lambda grid, or lambda(sigma) over a sigma grid."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    if rows and "sigma_lambda" in rows[0]:
        ax.plot([r["lambda"] for r in rows], [r["sigma_lambda"] for r in rows],
                "o-", ms=3)
        ax.set_xlabel("lambda")
        ax.set_ylabel("sigma(lambda)")
    else:
        sig = [r["sigma"] for r in rows]
        ax.plot(sig, [r["lambda_sigma"] for r in rows], "o-", ms=3,
                label="lambda(sigma)")
        ax.plot(sig, [r["half_sigma_sq"] for r in rows], "--",
                label="sigma^2 / 2")
        ax.set_xlabel("sigma")
        ax.legend()
    ax.set_title("critical constants")
    return _finish(fig, path)


def save_solution_plot(rows, solution, path):
    """Solution profile with curvature and the gluing points marked."""
    xs = [r["x"] for r in rows]
    fig, (ax0, ax1) = plt.subplots(2, 1, sharex=True, figsize=(6.4, 5.6))
    ax0.plot(xs, [r["H"] for r in rows])
    ax0.set_ylabel("H")
    ax1.plot(xs, [r["d2"] for r in rows], color="C1")
    ax1.axhline(0.0, color="0.7", lw=0.8)
    ax1.set_ylabel("H''")
    ax1.set_xlabel("x")
    for ax in (ax0, ax1):
        for s in (-1.0, 1.0):
            ax.axvline(s * solution.breakpoint, color="0.8", ls=":", lw=0.8)
    ax0.set_title(f"glued solution, lambda={solution.lam:.6g} "
                  f"sigma={solution.sigma:.6g}")
    return _finish(fig, path)


def save_pde_verify_plot(results, path):
    """Max error against dx on log-log axes with slope guides."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    dxs = [r["dx"] for r in results]
    errs = [r["max_error"] for r in results]
    ax.loglog(dxs, errs, "o-", label="max error")
    ref = errs[0]
    ax.loglog(dxs, [ref * (d / dxs[0]) ** 2 for d in dxs], "--",
              color="0.6", label="slope 2")
    ax.set_xlabel("dx")
    ax.set_ylabel("max |numeric - closed form|")
    ax.legend()
    ax.set_title(f"solver vs closed form, sigma={results[0]['sigma']:.4g}")
    return _finish(fig, path)


def save_capacity_plot(reports, path):
    """Sandwich brackets and closed-form upper bound against epsilon."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    eps = [r.epsilon for r in reports]
    ax.loglog(eps, [r.sandwich_upper for r in reports], "v-", label="sandwich upper")
    ax.loglog(eps, [r.sandwich_lower for r in reports], "^-", label="sandwich lower")
    ax.loglog(eps, [r.point_estimate for r in reports], "o--", label="point estimate")
    if all(r.upper_bound_closed == r.upper_bound_closed for r in reports):  # not NaN
        ax.loglog(eps, [r.upper_bound_closed for r in reports], "-",
                  color="0.5", label="closed-form upper bound")
    ax.set_xlabel("epsilon")
    ax.set_ylabel("capacity of [-eps, eps]")
    ax.legend()
    ax.set_title(f"capacity sandwich, sigma={reports[0].sigma:.4g}")
    return _finish(fig, path)


def save_order_plot(fit, path):
    """Log-log capacity points, fitted slope and the target-order guide."""
    import numpy as np

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    eps = np.asarray(fit.epsilons)
    caps = np.asarray(fit.capacities)
    ax.loglog(eps, caps, "o", label="point estimates")
    lx = np.log(eps)
    slope, intercept = np.polyfit(lx, np.log(caps), 1)
    ax.loglog(eps, np.exp(intercept + slope * lx), "-",
              label=f"fit: slope {slope:.4f}")
    anchor = caps[0] / eps[0] ** fit.target_exponent
    ax.loglog(eps, anchor * eps ** fit.target_exponent, "--", color="0.6",
              label=f"target: slope {fit.target_exponent:.4f}")
    ax.set_xlabel("epsilon")
    ax.set_ylabel("capacity estimate")
    ax.legend()
    ax.set_title(f"sharp-order fit, sigma={fit.sigma:.4g}, r2={fit.r2:.5f}")
    return _finish(fig, path)
