"""Independent high-precision reference values for the unit tests.

Run with mpmath installed; writes tests/reference_values.hpp next to this
directory. The generated header is committed so the build does not need
Python.
"""

import pathlib

import mpmath as mp

mp.mp.dps = 40

A = mp.mpf(3) / 4
C1 = 1 + A
C2 = 1 - A


def spectral_function(lam, c1=C1, c2=C2):
    return mp.gamma((c1 - lam) / 2) / mp.gamma((c2 - lam) / 2) * mp.gamma(c2) / mp.gamma(c1)


def spectrum_levels(L, count):
    target = (C1 - C2) / L
    f = lambda lam: spectral_function(lam) - target
    levels = []
    # the lowest root lies below c1, the others one per pole interval
    brackets = [(mp.mpf(-40), C1 - mp.mpf("1e-30"))]
    k = 0
    while len(brackets) < count:
        brackets.append((C1 + 2 * k + mp.mpf("1e-30"), C1 + 2 * k + 2 - mp.mpf("1e-30")))
        k += 1
    for lo, hi in brackets:
        levels.append(mp.findroot(f, (lo, hi), solver="anderson"))
    return levels


def sigma1_norm(n, c):
    return mp.sqrt(mp.gamma(n + c) / (mp.gamma(c) ** 2 * mp.factorial(n)))


def sigma1_state(n, s, x):
    c = C1 if s == 1 else C2
    y = abs(x)
    val = sigma1_norm(n, c) * y ** (c - mp.mpf(1) / 2) * mp.exp(-y * y / 2) * mp.hyp1f1(-n, c, y * y)
    return -val if (s == 1 and x < 0) else val


def kernel_closed(xf, xi, T, a=A):
    s = mp.sin(T)
    c = mp.cos(T)
    z = mp.mpc(0, -1) * abs(xf * xi) / s
    same = (xf > 0) == (xi > 0)
    br = mp.besseli(-a, z) + (mp.besseli(a, z) if same else -mp.besseli(a, z))
    return 1 / (2j * s) * mp.sqrt(abs(xf * xi)) * mp.exp(1j * c * (xf ** 2 + xi ** 2) / (2 * s)) * br


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-1, max_fixed=-1) if v != 0 else "0.0"


def cplx(v):
    return f"{{{fmt(mp.re(v))}, {fmt(mp.im(v))}}}"


def main():
    lines = ["#pragma once", "", "// Generated by tests/oracles/reference.py (mpmath, 40 digits). Do not edit.", "",
             "#include <array>", "#include <complex>", "", "namespace isq::reference {", ""]

    def scalar(name, v):
        lines.append(f"constexpr double {name} = {fmt(v)};")

    def complex_(name, v):
        lines.append(f"const std::complex<double> {name}{cplx(v)};")

    scalar("spectral_f0_a075", spectral_function(0))
    scalar("gamma_0p3", mp.gamma(mp.mpf("0.3")))
    scalar("gamma_m2p5", mp.gamma(mp.mpf("-2.5")))
    scalar("gamma_7p7", mp.gamma(mp.mpf("7.7")))
    scalar("gamma_m0p875", mp.gamma(mp.mpf("-0.875")))
    scalar("gamma_45p3", mp.gamma(mp.mpf("45.3")))
    scalar("kummer_m5_1p75_3p2", mp.hyp1f1(-5, mp.mpf("1.75"), mp.mpf("3.2")))
    scalar("kummer_0p3_1p75_50", mp.hyp1f1(mp.mpf("0.3"), mp.mpf("1.75"), 50))
    scalar("kummer_m20p3_0p25_30", mp.hyp1f1(mp.mpf("-20.3"), mp.mpf("0.25"), 30))
    scalar("kummer_m40p1_1p75_90", mp.hyp1f1(mp.mpf("-40.1"), mp.mpf("1.75"), 90))
    scalar("kummer_2p2_0p25_12", mp.hyp1f1(mp.mpf("2.2"), mp.mpf("0.25"), 12))
    scalar("tricomi_0p4_0p25_3", mp.hyperu(mp.mpf("0.4"), mp.mpf("0.25"), 3))
    scalar("tricomi_m10p3_0p25_5", mp.hyperu(mp.mpf("-10.3"), mp.mpf("0.25"), 5))
    scalar("tricomi_m0p2_0p25_0p1", mp.hyperu(mp.mpf("-0.2"), mp.mpf("0.25"), mp.mpf("0.1")))
    scalar("laguerre_5_0p75_3p2", mp.laguerre(5, mp.mpf("0.75"), mp.mpf("3.2")))
    scalar("bessel_j_0p75_30", mp.besselj(mp.mpf("0.75"), 30))
    scalar("bessel_j_m0p75_2p5", mp.besselj(mp.mpf("-0.75"), mp.mpf("2.5")))
    complex_("bessel_i_0p75_m5i", mp.besseli(mp.mpf("0.75"), mp.mpc(0, -5)))
    complex_("bessel_i_m0p75_m40i", mp.besseli(mp.mpf("-0.75"), mp.mpc(0, -40)))
    complex_("bessel_i_0p75_2p1i", mp.besseli(mp.mpf("0.75"), mp.mpc(2, 1)))

    levels = spectrum_levels(1, 8)
    lines.append("constexpr std::array<double, 8> spectrum_L1_a075{" + ", ".join(fmt(v) for v in levels) + "};")
    scalar("sigma1_norm_n3_s1", sigma1_norm(3, C1))
    scalar("sigma1_norm_n3_s2", sigma1_norm(3, C2))
    scalar("sigma1_psi_n4_s2_x0p9", sigma1_state(4, 2, mp.mpf("0.9")))
    scalar("sigma1_psi_n2_s1_xm1p3", sigma1_state(2, 1, mp.mpf("-1.3")))

    # two lowest modes with damping epsilon = 5 at (x_f, x_i, T) = (1, 0.7, 1.1)
    eps = 5
    two_term = 0
    for s, c in ((1, C1), (2, C2)):
        two_term += sigma1_state(0, s, mp.mpf(1)) * sigma1_state(0, s, mp.mpf("0.7")) * mp.exp(-c * eps / 2) * \
            mp.exp(-1j * c * mp.mpf("1.1"))
    complex_("kernel_two_term_eps5", two_term)
    complex_("kernel_closed_same", kernel_closed(mp.mpf(1), mp.mpf("0.7"), mp.mpf("1.1")))
    complex_("kernel_closed_cross", kernel_closed(mp.mpf(-1), mp.mpf("0.7"), mp.mpf("1.1")))

    # j(+0) for c_0^(1) = 1/sqrt2, c_0^(2) = i/sqrt2: -(2a) Im(conj(A) B)
    amp_a = 1 / mp.sqrt(2) * sigma1_norm(0, C1)
    amp_b = 1j / mp.sqrt(2) * sigma1_norm(0, C2)
    scalar("current_mixed_ground", -2 * A * mp.im(mp.conj(amp_a) * amp_b))

    lines += ["", "}  // namespace isq::reference", ""]
    out = pathlib.Path(__file__).resolve().parent.parent / "reference_values.hpp"
    out.write_text("\n".join(lines))


if __name__ == "__main__":
    main()
