"""High-precision reference values for the test suites.

Rates are built from the large-mu spectra and mutual information at a huge
modulation (mu = 1e40, 90 digits), not from the closed-form offsets used by
the C++ kernels. Derivatives come from mpmath's numerical differentiation of
that rate. Run: python3 tools/oracles/rate_oracle.py
"""

from mpmath import mp, mpf, log, sqrt, diff, findroot, ln

mp.dps = 90
MU = mpf(10) ** 40


def h(x):
    x = mpf(x)
    if x == 1:
        return mpf(0)
    a, b = (x + 1) / 2, (x - 1) / 2
    return a * log(a, 2) - b * log(b, 2)


def total_entropy(tau, w, g, gp):
    nu_p = sqrt((w + g) * (w + gp))
    nu_m = sqrt((w - g) * (w - gp))
    big = (1 - tau) * MU
    return h(nu_p) + h(nu_m) + 2 * h(big)


def rate(protocol, tau, w, g, gp):
    tau, w, g, gp = map(mpf, (tau, w, g, gp))
    vb = tau + (1 - tau) * w
    s_ab = total_entropy(tau, w, g, gp)
    if protocol == "noswitching":
        i_ab = 2 * log(tau * MU / (1 + vb), 2)
        lp = [1 + (1 - tau) * (w + g), 1 + (1 - tau) * (w - g)]
        lpp = [1 + (1 - tau) * (w + gp), 1 + (1 - tau) * (w - gp)]
        s_c = h(sqrt(lp[0] * lpp[0]) / tau) + h(sqrt(lp[1] * lpp[1]) / tau)
    else:
        i_ab = log(tau * MU / vb, 2)
        scale = (1 - tau) / tau * MU

        def branch(x):
            return h(sqrt(scale * (w + x))) + h(sqrt(scale * (w - x)))

        if protocol == "switching":
            s_c = (branch(g) + branch(gp)) / 2
        else:
            s_c = 2 * h(sqrt(scale * w))
    return (i_ab - (s_ab - s_c)) / 2


def show(label, value, digits=17):
    print(f"{label} = {mp.nstr(value, digits)}")


if __name__ == "__main__":
    show("h(1.2)", h(mpf("1.2")))
    show("h(3)", h(3))
    for proto, pt in [("noswitching", (0.44, 1.2, 0, 0)),
                      ("noswitching", (0.44, 1.2, 0.3, -0.1)),
                      ("noswitching", (0.6, 1.5, 0.2, 0.4)),
                      ("switching", (0.44, 1.2, 0.3, -0.1)),
                      ("switching", (0.6, 1.5, 0.2, 0.4)),
                      ("switching-mixed", (0.44, 1.2, 0.3, -0.1)),
                      ("noswitching", (0.01, 1, 0, 0))]:
        show(f"R[{proto}]{pt}", rate(proto, *map(mpf, map(str, pt))))
    for w in ("1.2", "1.3", "1.1", "1.4"):
        root = findroot(lambda t: rate("noswitching", t, mpf(w), 0, 0), mpf("0.45"))
        show(f"tau*(omega={w})", root)
    print("ratio R/(tau/ln4) at tau=0.01, omega=1:",
          mp.nstr(rate("noswitching", mpf("0.01"), 1, 0, 0) / (mpf("0.01") / ln(4)), 17))
    for proto, tau, w in [("switching", "0.5", "1.5"), ("noswitching", "0.6", "1.2"),
                          ("noswitching", "0.3", "2")]:
        f = lambda g, gp: rate(proto, mpf(tau), mpf(w), g, gp)
        h11 = diff(f, (0, 0), (2, 0))
        h12 = diff(f, (0, 0), (1, 1))
        show(f"H11[{proto}] tau={tau} omega={w}", h11)
        show(f"H12[{proto}] tau={tau} omega={w}", h12)
        show(f"detH[{proto}] tau={tau} omega={w}", h11 * h11 - h12 * h12)
    f = lambda g, gp: rate("switching", mpf("0.5"), mpf("1.5"), g, gp)
    show("dR/dg[switching](0.5,1.5,0.2,0.1)", diff(f, (mpf("0.2"), mpf("0.1")), (1, 0)))
    show("dR/dg'[switching](0.5,1.5,0.2,0.1)", diff(f, (mpf("0.2"), mpf("0.1")), (0, 1)))
