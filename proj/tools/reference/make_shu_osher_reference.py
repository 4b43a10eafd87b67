#!/usr/bin/env python3
"""Generate the Shu-Osher density reference files.

Fifth-order WENO-JS finite volume scheme with global Lax-Friedrichs flux
splitting (component-wise), SSP-RK3 in time, transmissive boundaries.
Domain [-1, 1] (the classic [-5, 5] setup scaled by 1/5), interface at -0.8.

    python3 make_shu_osher_reference.py --cells 10000 --out ../../data/reference
"""
import argparse
import math
import os

import numpy as np

GAMMA = 1.4


def primitive_to_conserved(rho, u, p):
    return np.array([rho, rho * u, p / (GAMMA - 1.0) + 0.5 * rho * u * u])


def flux(q):
    rho, mom, ener = q
    u = mom / rho
    p = (GAMMA - 1.0) * (ener - 0.5 * mom * u)
    return np.array([mom, mom * u + p, (ener + p) * u]), u, p


def weno5_left(v):
    """Left-biased WENO5-JS reconstruction at i+1/2 from v[i-2..i+2]."""
    vm2, vm1, v0, vp1, vp2 = v[:, :-4], v[:, 1:-3], v[:, 2:-2], v[:, 3:-1], v[:, 4:]
    b0 = 13 / 12 * (vm2 - 2 * vm1 + v0) ** 2 + 0.25 * (vm2 - 4 * vm1 + 3 * v0) ** 2
    b1 = 13 / 12 * (vm1 - 2 * v0 + vp1) ** 2 + 0.25 * (vm1 - vp1) ** 2
    b2 = 13 / 12 * (v0 - 2 * vp1 + vp2) ** 2 + 0.25 * (3 * v0 - 4 * vp1 + vp2) ** 2
    eps = 1e-6
    a0 = 0.1 / (eps + b0) ** 2
    a1 = 0.6 / (eps + b1) ** 2
    a2 = 0.3 / (eps + b2) ** 2
    p0 = (2 * vm2 - 7 * vm1 + 11 * v0) / 6
    p1 = (-vm1 + 5 * v0 + 2 * vp1) / 6
    p2 = (2 * v0 + 5 * vp1 - vp2) / 6
    return (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2)


def rhs(q, dx):
    ng = 3
    qg = np.concatenate([np.repeat(q[:, :1], ng, axis=1), q, np.repeat(q[:, -1:], ng, axis=1)], axis=1)
    f, u, p = flux(qg)
    c = np.sqrt(GAMMA * p / qg[0])
    alpha = np.max(np.abs(u) + c)
    fp = 0.5 * (f + alpha * qg)
    fm = 0.5 * (f - alpha * qg)
    # interfaces i+1/2 for i = ng-1 .. ng+n-1  (n+1 interfaces)
    fplus = weno5_left(fp[:, 0:-1])          # uses cells i-2..i+2, centered at i
    fminus = weno5_left(fm[:, :0:-1])[:, ::-1]  # mirrored stencil
    # fplus[:, j] is at interface (j+2)+1/2; fminus[:, j] at interface (j+3)-1/2 = (j+2)+1/2
    fhat = fplus + fminus
    n = q.shape[1]
    fhat = fhat[:, ng - 3:ng - 3 + n + 1]
    return -(fhat[:, 1:] - fhat[:, :-1]) / dx, alpha


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cells", type=int, default=10000)
    ap.add_argument("--cfl", type=float, default=0.5)
    ap.add_argument("--times", type=float, nargs="+", default=[0.18, 0.36])
    ap.add_argument("--out", default=".")
    args = ap.parse_args()

    n = args.cells
    dx = 2.0 / n
    x = -1.0 + (np.arange(n) + 0.5) * dx
    left = x < -0.8
    rho = np.where(left, 27.0 / 7.0, 1.0 + 0.2 * np.sin(25.0 * x))
    u = np.where(left, 4.0 * math.sqrt(35.0) / 9.0, 0.0)
    p = np.where(left, 31.0 / 3.0, 1.0)
    q = primitive_to_conserved(rho, u, p)

    t = 0.0
    for t_out in sorted(args.times):
        while t < t_out - 1e-14:
            _, alpha = rhs(q, dx)
            dt = min(args.cfl * dx / alpha, t_out - t)
            k1, _ = rhs(q, dx)
            q1 = q + dt * k1
            k2, _ = rhs(q1, dx)
            q2 = 0.75 * q + 0.25 * (q1 + dt * k2)
            k3, _ = rhs(q2, dx)
            q = q / 3.0 + 2.0 / 3.0 * (q2 + dt * k3)
            t += dt
        path = os.path.join(args.out, f"shu_osher_t{t_out:.2f}.csv")
        with open(path, "w") as fh:
            fh.write(f"# case=shu_osher t={t_out:g} n={n}\n")
            fh.write("# WENO5-JS (LF splitting), SSP-RK3, CFL %.2f, cell averages\n" % args.cfl)
            for xi, ri in zip(x, q[0]):
                fh.write(f"{xi:.17g},{ri:.17g}\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
