#!/usr/bin/env python3
"""High-precision evaluation of the two-derivative integrator coefficient
formulas. Used once to freeze expected values into the C++ unit tests."""

import mpmath as mp

mp.mp.dps = 50

def coeffs_A(h, w):
    b0 = h / 2
    bm1 = h / 2
    c0 = -1 / w**2 + (h / (2 * w)) * mp.cot(w * h / 2)
    cm1 = 1 / w**2 - (h / (2 * w)) * mp.cot(w * h / 2)
    return b0, bm1, c0, cm1

def coeffs_B(h, w):
    return mp.sin(w * h) / w, mp.mpf(0), (mp.cos(w * h) - 1) / w**2, mp.mpf(0)

def coeffs_C(h):
    return h / 2, h / 2, -h**2 / 12, h**2 / 12

def coeffs_D(h):
    return h, mp.mpf(0), -h**2 / 2, mp.mpf(0)

def show(name, vals):
    print(name, " ".join(mp.nstr(v, 17) for v in vals))

w60 = 2 * mp.pi * 60
h = mp.mpf("0.001")

show("A(h=1e-3, w=2pi*60):", coeffs_A(h, w60))
show("B(h=1e-3, w=2pi*60):", coeffs_B(h, w60))
show("C(h=1e-3):          ", coeffs_C(h))
show("D(h=1e-3):          ", coeffs_D(h))

# A degenerates to C: difference of c0 at w*h = 1e-4
h2 = mp.mpf("1e-4") / w60
a = coeffs_A(h2, w60)
c = coeffs_C(h2)
print("wh=1e-4: c0_A =", mp.nstr(a[2], 17), " c0_C =", mp.nstr(c[2], 17),
      " |diff|/h^2 =", mp.nstr(abs(a[2] - c[2]) / h2**2, 6))

# Series expansion check for A's c0: -h^2*(1/12 + (wh)^2/720 + (wh)^4/30240 + (wh)^6/1209600)
def c0_series(h, w):
    th = w * h
    return -h**2 * (mp.mpf(1)/12 + th**2/720 + th**4/30240 + th**6/1209600)

for wh in ["1e-3", "1e-6", "1e-8", "0.5"]:
    hh = mp.mpf(wh) / w60
    exact = coeffs_A(hh, w60)[2]
    ser = c0_series(hh, w60)
    print(f"wh={wh}: c0 exact={mp.nstr(exact, 17)} series={mp.nstr(ser, 17)} rel={mp.nstr(abs(ser-exact)/abs(exact), 3)}")

# spec example: 2*pi*60*4.2441e-4 (current controller decoupling gain)
print("w_base*L_f =", mp.nstr(w60 * mp.mpf("4.2441e-4"), 17))
# branch current magnitude example
z = mp.mpc("0.1038", "0.8416")
print("1/|0.1038+j0.8416| =", mp.nstr(1 / abs(z), 17))
# first-order lag at one time constant
print("1-exp(-1) =", mp.nstr(1 - mp.e**-1, 17))
