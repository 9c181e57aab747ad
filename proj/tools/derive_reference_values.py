#!/usr/bin/env python3
"""Reference values frozen into tests/reference_values.hpp.

Integrates the z equation for the exponentially growing mass background with
mpmath's high-precision Taylor ODE solver (no closed forms involved) and
derives every downstream quantity directly from its definition.

    python3 tools/derive_reference_values.py > tests/reference_values.hpp
"""

import mpmath as mp

mp.mp.dps = 30


def z_at(gamma, omega, t):
    kappa = 2 * gamma

    def rhs(_, y):
        z = mp.mpc(y[0], y[1])
        dz = -2j * omega * z - 0.5 * kappa * (z * z - 1)
        return [dz.real, dz.imag]

    sol = mp.odefun(rhs, 0, [mp.mpf(0), mp.mpf(0)])
    y = sol(t)
    return mp.mpc(y[0], y[1])


def derived(gamma, omega, t):
    z = z_at(gamma, omega, t)
    s = mp.e ** (2 * gamma * t) * omega  # m omega with m0 = 1
    d = 1 - abs(z) ** 2
    n = abs(z) ** 2 / d
    q2 = abs(1 + z) ** 2 / (2 * s * d)
    p2 = s * abs(1 - z) ** 2 / (2 * d)
    # q2, p2 normalized by the t = 0 ground state (m0 = omega0 = 1 here only if omega = 1)
    C = mp.acosh(omega * q2 + p2 / omega) / 2
    g = (omega * (1 + z) - s * (1 - z)) / (omega * (1 + z) + s * (1 - z))
    cs = mp.mpf(1) / 2 * abs(g) ** 2 / (1 - abs(g) ** 2)
    return dict(z_re=z.real, z_im=z.imag, n=n, q2=q2, p2=p2, C=C, gp_re=g.real, gp_im=g.imag, CS=cs)


CASES = [("UD_T1", 0.5, 1.0, 1.0), ("CR_T2", 1.0, 1.0, 2.0), ("OD_T05", 2.0, 1.0, 0.5)]


def main():
    print("#pragma once")
    print()
    print("// Generated by tools/derive_reference_values.py (30-digit Taylor integration).")
    print()
    print("namespace ref {")
    print()
    print("struct Point {")
    print("  double gamma, omega, t;")
    print("  double z_re, z_im, n, q2, p2, C, gp_re, gp_im, CS;")
    print("};")
    print()
    for name, g, w, t in CASES:
        v = derived(mp.mpf(g), mp.mpf(w), mp.mpf(t))
        vals = ", ".join(mp.nstr(v[k], 17, min_fixed=-1, max_fixed=-1) for k in
                         ("z_re", "z_im", "n", "q2", "p2", "C", "gp_re", "gp_im", "CS"))
        print(f"inline constexpr Point {name}{{{g}, {w}, {t}, {vals}}};")
    print()
    print("}  // namespace ref")


if __name__ == "__main__":
    main()
