"""Independent high-precision reference values frozen into the C++ tests.

Run with: python3 tests/oracles/generate.py
"""
import json
import pathlib

import mpmath as mp

mp.mp.dps = 40
ROOT = pathlib.Path(__file__).resolve().parents[2]


def n(u, a):
    return mp.atan((1 + u**2) / (1 - u**2) * mp.tan(a))


def m(u, a):
    return (1 - u**2) * mp.sin(2 * a) / (1 - 2 * u**2 * mp.cos(2 * a) + u**4)


def f(u, a):
    return (1 - u**2) * mp.sin(2 * a) / (1 + 2 * u**2 * mp.cos(2 * a) + u**4)


def g(u, a):
    return mp.atan((1 - u**2) / (1 + u**2) * mp.tan(a))


def coefficients(diameter, gage, alpha):
    r = mp.mpf(diameter) / 2
    c = mp.mpf(gage) / 2 / r
    a = mp.mpf(alpha)
    # Dense composite Gauss-Legendre panels at extended precision.
    panels = 400
    edges = [-c + 2 * c * k / panels for k in range(panels + 1)]
    I = {}
    for name, k in (("n", n), ("m", m), ("f", f), ("g", g)):
        I[name] = sum(mp.quad(lambda u: k(u, a), [edges[i], edges[i + 1]], method="gauss-legendre")
                      for i in range(panels))
    s = r / 1000
    return [s * (I["n"] + I["m"]), s * (I["n"] - I["m"]), s * (I["f"] - I["g"]), s * (I["f"] + I["g"])]


def sig(t):
    return 1 / (1 + mp.exp(-t))


def main():
    print("// kernels")
    print("n(0.5, 0.125) =", mp.nstr(n(mp.mpf("0.5"), mp.mpf("0.125")), 20))
    print("m(0.5, 0.125) =", mp.nstr(m(mp.mpf("0.5"), mp.mpf("0.125")), 20))
    print("f(0.3, 0.125) =", mp.nstr(f(mp.mpf("0.3"), mp.mpf("0.125")), 20))
    print("g(0.3, 0.125) =", mp.nstr(g(mp.mpf("0.3"), mp.mpf("0.125")), 20))

    print("// coefficients {diameter, gage, alpha} -> beta1, beta2, gamma1, gamma2")
    for geom in ((152.4, 65.0, 0.12394), (152.4, 38.1, 0.12394), (101.6, 50.8, 0.12394),
                 (150.0, 75.0, 0.1), (152.4, 100.0, 0.2)):
        print(geom, [mp.nstr(v, 17) for v in coefficients(*geom)])

    print("// modulus: published 152.4/65 coefficients, P0 = 3 kN, a = 19.05, d = 38.1, v0 = 0.004, u0 = 0.003 (mm)")
    b1, b2, g1, g2 = (mp.mpf(x) for x in ("0.0262", "-0.0078", "0.0063", "0.0206"))
    P, a, d, v, u = mp.mpf(3000), mp.mpf("0.01905"), mp.mpf("0.0381"), mp.mpf("0.004e-3"), mp.mpf("0.003e-3")
    print(mp.nstr(2 * P * (b1 * g2 - b2 * g1) / (mp.pi * a * d * (g2 * v - b2 * u)) / 10**6, 17), "MPa")

    print("// sigmoid(1) =", mp.nstr(sig(1), 17))
    meas = [1, 2, 3, 4]
    pred = [mp.mpf("1.1"), mp.mpf("1.9"), mp.mpf("3.2"), mp.mpf("3.8")]
    mm_, mp_ = sum(meas) / mp.mpf(4), sum(pred) / 4
    num = sum((x - mm_) * (y - mp_) for x, y in zip(meas, pred))
    den = mp.sqrt(sum((x - mm_) ** 2 for x in meas) * sum((y - mp_) ** 2 for y in pred))
    print("// r_fit =", mp.nstr(num / den, 17))

    print("// extract: s11 100 kPa /0.3, s22 -30 kPa /0.3, e11 70e-6 /0, nu 0.25")
    e = (100 * mp.expj(mp.mpf("0.3")) - mp.mpf("0.25") * (-30) * mp.expj(mp.mpf("0.3"))) / (mp.mpf("70e-6")) / 1000
    print(mp.nstr(abs(e), 17), "MPa", mp.nstr(mp.arg(e), 17), "rad")

    print("// wlf(-17.44, 51.6, 17.1; 33.8) =", mp.nstr(mp.mpf("-17.44") * mp.mpf("16.7") / (mp.mpf("51.6") + mp.mpf("16.7")), 17))

    preset = json.loads((ROOT / "assets" / "ann_preset_v1.json").read_text())
    W = [[mp.mpf(repr(x)) for x in row] for row in preset["input_weights"]]
    Wj = [mp.mpf(repr(x)) for x in preset["output_weights"]]
    Bh = [mp.mpf(repr(x)) for x in preset["hidden_biases"]]
    B0 = mp.mpf(repr(preset["output_bias"]))
    print("// preset forward_raw on the network-domain vectors of the acceptance test")
    for vec in VECTORS:
        x = [mp.mpf(s) for s in vec]
        hidden = [sig(Bh[j] + sum(W[j][i] * x[i] for i in range(8))) for j in range(len(Bh))]
        print(mp.nstr(sig(B0 + sum(Wj[j] * hidden[j] for j in range(len(Bh)))), 20))


VECTORS = [
    ["0"] * 8,
    ["1"] * 8,
    ["-1"] * 8,
    ["0.5", "-0.5", "0.25", "-0.25", "0.75", "-0.75", "0.1", "-0.1"],
    ["-0.9", "0.8", "-0.7", "0.6", "-0.5", "0.4", "-0.3", "0.2"],
    ["0.33", "0.66", "-0.12", "0.05", "-0.98", "0.41", "0.27", "-0.63"],
    ["1", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "1"],
    ["-0.2", "-0.4", "-0.6", "-0.8", "0.8", "0.6", "0.4", "0.2"],
    ["0.123", "-0.456", "0.789", "-0.321", "0.654", "-0.987", "0.111", "-0.222"],
]

if __name__ == "__main__":
    main()
