#!/usr/bin/env python3
"""Independent phasor-domain steady-state solution of the two-bus test system
(pre-fault). Straightforward complex nodal analysis per phase plus a fixed
point on the converter's ordered current injection. Values printed here are
frozen into the C++ tests as the steady-state oracle."""

import cmath
import math

W = 2 * math.pi * 60.0

# branch bus1 -> bus2
Z_BR = 0.1038 + 0.8416j

# loads at bus1, per phase
P_LOAD = [0.24, 0.30, 0.36]
Q_LOAD = [0.072, 0.09, 0.108]
Z_LOAD = [1.0 / (p - 1j * q) for p, q in zip(P_LOAD, Q_LOAD)]   # |V|=1

# ideal sources at bus2
V2 = [1.03 * cmath.exp(1j * math.radians(0.0)),
      1.00 * cmath.exp(1j * math.radians(-121.0)),
      0.98 * cmath.exp(1j * math.radians(118.0))]

# converter at bus1
LF = 4.2441e-4
XF = W * LF
ZF = 1j * XF
P_REF, Q_REF = 1.0, 0.35

A = cmath.exp(2j * math.pi / 3)
ROT = [1.0, A * A, A]            # positive-sequence multipliers for phases a,b,c


def solve_network(v_vsc):
    """Nodal solve for bus-1 voltages given the VSC phasor per phase."""
    v1 = []
    for ph in range(3):
        y = 1.0 / Z_BR + 1.0 / ZF + 1.0 / Z_LOAD[ph]
        rhs = V2[ph] / Z_BR + v_vsc[ph] / ZF
        v1.append(rhs / y)
    return v1


def positive_sequence(x):
    return (x[0] + A * x[1] + A * A * x[2]) / 3.0


def negative_sequence(x):
    return (x[0] + A * A * x[1] + A * x[2]) / 3.0


v_vsc = [1.0 * r for r in ROT]
for it in range(500):
    v1 = solve_network(v_vsc)
    vp = positive_sequence(v1)
    delta = cmath.phase(vp)
    vod = abs(vp)
    iord_d = P_REF / vod
    iord_q = -Q_REF / vod
    # voltage order: terminal feed-forward + wL decoupling, PI outputs zero
    vord = (vod - XF * iord_q) + 1j * (XF * iord_d)
    v_vsc_plus = vord * cmath.exp(1j * delta)
    nxt = [v_vsc_plus * r for r in ROT]
    err = max(abs(a - b) for a, b in zip(nxt, v_vsc))
    v_vsc = nxt
    if err < 1e-15:
        break

print(f"converged in {it} iterations, err={err:.3e}")

v1 = solve_network(v_vsc)
i_branch = [(v1[ph] - V2[ph]) / Z_BR for ph in range(3)]      # bus1 -> bus2
i_load = [v1[ph] / Z_LOAD[ph] for ph in range(3)]
i_filt = [(v_vsc[ph] - v1[ph]) / ZF for ph in range(3)]

vp = positive_sequence(v1)
delta = cmath.phase(vp)
vod = abs(vp)
ifp = positive_sequence(i_filt)
i_o = ifp * cmath.exp(-1j * delta)      # dq components of the injected current

def dump(name, xs):
    for ph, x in zip("abc", xs):
        print(f"{name}_{ph} = {x.real:+.16e} {x.imag:+.16e}  (|.|={abs(x):.12f} ang={math.degrees(cmath.phase(x)):+.8f} deg)")

dump("V1", v1)
dump("Ibr", i_branch)
dump("Ild", i_load)
dump("If", i_filt)
dump("Vvsc", v_vsc)
print(f"V1_plus   = {vp.real:+.16e} {vp.imag:+.16e}  |V+|={vod:.16f} delta={delta:.16f} rad")
print(f"V1_minus  = {abs(negative_sequence(v1)):.8f}")
print(f"If_minus  = {abs(negative_sequence(i_filt)):.8f}")
print(f"I_ord(dq) = ({P_REF/vod:+.16e}, {-Q_REF/vod:+.16e})")
print(f"I_o(dq)   = ({i_o.real:+.16e}, {i_o.imag:+.16e})")
print(f"P+ = {(vp * i_o.conjugate() * cmath.exp(-1j*delta)).real:.12f}")
pq = vod * i_o
print(f"check P_pre+ = {vod * i_o.real:.12f}  Q_pre+ = {-vod * i_o.imag:.12f}")
# KCL residual check
for ph in range(3):
    r = (V2[ph] - v1[ph]) / Z_BR + (v_vsc[ph] - v1[ph]) / ZF - v1[ph] / Z_LOAD[ph]
    assert abs(r) < 1e-12, r
print("KCL ok")
