"""Flat-tuple evaluation of the inverse-simulation right-hand side.

This is a performance copy of :meth:`invsim.inverse.InverseSimulator.derivatives`
and :func:`invsim.trajectory.path_point`.  Jets are plain 3-tuples
``(value, d1, d2)`` and every operation is written out, avoiding object
allocation.  The test suite checks it against the jet-class implementation.
"""

from __future__ import annotations

import math

from .atmosphere import (G, H_TROPOPAUSE, LAPSE_RATE, RHO_SEA_LEVEL, RHO_TROPOPAUSE,
                         T_SEA_LEVEL, _ISOTHERMAL_DECAY, _TROPO_EXPONENT)
from .errors import DomainError

_sin, _cos, _sqrt, _atan2 = math.sin, math.cos, math.sqrt, math.atan2


def _mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    return (a0 * b0, a1 * b0 + a0 * b1, a2 * b0 + 2.0 * a1 * b1 + a0 * b2)


def _sc(a):
    a0, a1, a2 = a
    s, c = _sin(a0), _cos(a0)
    a11 = a1 * a1
    return (s, c * a1, -s * a11 + c * a2), (c, -s * a1, -c * a11 - s * a2)


def _div(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    q0 = a0 / b0
    q1 = (a1 - q0 * b1) / b0
    return (q0, q1, (a2 - 2.0 * q1 * b1 - q0 * b2) / b0)


def _sqrtj(a):
    s0 = _sqrt(a[0])
    s1 = a[1] / (2.0 * s0)
    return (s0, s1, (a[2] - 2.0 * s1 * s1) / (2.0 * s0))


def _atan2j(y, x):
    x0, x1, x2 = x
    y0, y1, y2 = y
    r2 = x0 * x0 + y0 * y0
    num = x0 * y1 - y0 * x1
    return (_atan2(y0, x0), num / r2,
            ((x0 * y2 - y0 * x2) * r2 - num * 2.0 * (x0 * x1 + y0 * y1)) / (r2 * r2))


def _density_jet(h):
    h0, h1, h2 = h
    if not 0.0 <= h0 <= 20000.0:
        raise DomainError(f"altitude {h0:g} m outside the modelled range [0, 20000] m")
    if h0 < H_TROPOPAUSE:
        k = LAPSE_RATE / T_SEA_LEVEL
        u = 1.0 - k * h0
        n = _TROPO_EXPONENT
        r0 = RHO_SEA_LEVEL * u ** n
        f1 = -r0 * n * k / u
        f2 = r0 * n * (n - 1.0) * k * k / (u * u)
    else:
        r0 = RHO_TROPOPAUSE * math.exp(-_ISOTHERMAL_DECAY * (h0 - H_TROPOPAUSE))
        f1 = -_ISOTHERMAL_DECAY * r0
        f2 = _ISOTHERMAL_DECAY * _ISOTHERMAL_DECAY * r0
    return (r0, f1 * h1, f2 * h1 * h1 + f1 * h2)


def path_tuple(x, y, z, phi, h_ini, v_min, angle_guard):
    """Flat path data: ``(phi, ax, ay, az, V_dot, theta_w, psi_w, qbar)`` jets.

    ``x``, ``y``, ``z`` hold position derivatives of order 0-4.
    """
    vx, vy, vz = (x[1], x[2], x[3]), (y[1], y[2], y[3]), (z[1], z[2], z[3])
    ax, ay, az = (x[2], x[3], x[4]), (y[2], y[3], y[4]), (z[2], z[3], z[4])
    xx, yy, zz = _mul(vx, vx), _mul(vy, vy), _mul(vz, vz)
    H2 = (xx[0] + yy[0], xx[1] + yy[1], xx[2] + yy[2])
    V2 = (H2[0] + zz[0], H2[1] + zz[1], H2[2] + zz[2])
    if not V2[0] > v_min * v_min:
        raise ArithmeticError("airspeed below guard")
    if not H2[0] > math.sin(angle_guard) ** 2 * V2[0]:
        raise ArithmeticError("vertical flight: flight-path azimuth is undefined")
    V = _sqrtj(V2)
    va = _mul(vx, ax), _mul(vy, ay), _mul(vz, az)
    V_dot = _div(tuple(va[0][i] + va[1][i] + va[2][i] for i in range(3)), V)
    psi_w = _atan2j(vy, vx)
    theta_w = _atan2j((-vz[0], -vz[1], -vz[2]), _sqrtj(H2))
    rho = _density_jet((h_ini - z[0], -z[1], -z[2]))
    qbar = _mul(rho, V2)
    qbar = (0.5 * qbar[0], 0.5 * qbar[1], 0.5 * qbar[2])
    return (tuple(phi), ax, ay, az, V_dot, theta_w, psi_w, qbar)


def airframe_tuple(P):
    return (P.m, P.S, P.CL0, P.CLa, P.CD0, P.KCD, P.CCb)


def stage_derivatives(y, path, air, aeq, det_guard):
    """Right-hand side of the inverse-simulation state equation.

    Returns the 12 derivatives as a tuple, or raises ``ArithmeticError``
    with a description when a linear system is singular.
    """
    m, S, CL0, CLa, CD0, KCD, CCb = air
    T, al, be, ps, th, p, q, r, ald, bed, psd, thd = y
    PH, AX, AY, AZ, VD, TW, PW, QB = path

    sa, ca = _sc((al, ald, 0.0))
    sb, cb = _sc((be, bed, 0.0))
    st, ct = _sc((th, thd, 0.0))
    sp, cp = _sc((ps, psd, 0.0))
    sf, cf = _sc(PH)

    CL = (CL0 + CLa * (al + aeq), CLa * ald, 0.0)
    CL2 = _mul(CL, CL)
    CD = (CD0 + KCD * CL2[0], KCD * CL2[1], KCD * CL2[2])
    CC = (CCb * be, CCb * bed, 0.0)
    cacb = _mul(ca, cb)
    sacb = _mul(sa, cb)
    casb = _mul(ca, sb)
    sasb = _mul(sa, sb)
    t1, t2, t3 = _mul(CD, cacb), _mul(CC, casb), _mul(CL, sa)
    Cx = (t3[0] - t1[0] - t2[0], t3[1] - t1[1] - t2[1], t3[2] - t1[2] - t2[2])
    t1, t2 = _mul(CD, sb), _mul(CC, cb)
    Cy = (t2[0] - t1[0], t2[1] - t1[1], t2[2] - t1[2])
    t1, t2, t3 = _mul(CD, sacb), _mul(CC, sasb), _mul(CL, ca)
    Cz = (-t1[0] - t2[0] - t3[0], -t1[1] - t2[1] - t3[1], -t1[2] - t2[2] - t3[2])

    # thrust rate from the along-track balance
    kS = (QB[0] * S, QB[1] * S, QB[2] * S)
    u1, u2, u3 = _mul(Cx, cacb), _mul(Cy, sb), _mul(Cz, sacb)
    aero = _mul(kS, (u1[0] + u2[0] + u3[0], u1[1] + u2[1] + u3[1], 0.0))
    ctsf, ctcf = _mul(ct, sf), _mul(ct, cf)
    g1, g2, g3 = _mul(ctsf, sb), _mul(st, cacb), _mul(ctcf, sacb)
    mg = m * G
    num0 = m * VD[0] - aero[0] - mg * (g1[0] - g2[0] + g3[0])
    num1 = m * VD[1] - aero[1] - mg * (g1[1] - g2[1] + g3[1])
    T_dot = (num1 - (num0 / cacb[0]) * cacb[1]) / cacb[0]

    # second derivative of the force balance with unknown angle accelerations frozen
    k = (QB[0] * S / m, QB[1] * S / m, QB[2] * S / m)
    sfst, cfst = _mul(sf, st), _mul(cf, st)
    e1, e2 = _mul(sfst, cp), _mul(cf, sp)
    Ry0 = (e1[0] - e2[0], e1[1] - e2[1], e1[2] - e2[2])
    e1, e2 = _mul(sfst, sp), _mul(cf, cp)
    Ry1 = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
    Ry2 = ctsf
    e1, e2 = _mul(cfst, cp), _mul(sf, sp)
    Rz0 = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
    e1, e2 = _mul(cfst, sp), _mul(sf, cp)
    Rz1 = (e1[0] - e2[0], e1[1] - e2[1], e1[2] - e2[2])
    Rz2 = ctcf
    ry2 = (_mul(Ry0, AX)[2] + _mul(Ry1, AY)[2] + _mul(Ry2, AZ)[2]
           - G * ctsf[2] - _mul(k, Cy)[2])
    rz2 = (_mul(Rz0, AX)[2] + _mul(Rz1, AY)[2] + _mul(Rz2, AZ)[2]
           - G * ctcf[2] - _mul(k, Cz)[2])

    # flight-path relations
    stw, ctw = _sc(TW)
    sdp, cdp = _sc((PW[0] - ps, PW[1] - psd, PW[2]))
    raz2 = (_mul(ctw, sdp)[2] - _mul(cf, sb)[2] + _mul(_mul(sf, sa), cb)[2])
    rel2 = (stw[2] - _mul(st, cacb)[2] + _mul(ctsf, sb)[2] + _mul(ctcf, sacb)[2])

    # partial derivatives (plain floats)
    sa0, ca0, sb0, cb0 = sa[0], ca[0], sb[0], cb[0]
    st0, ct0, sp0, cp0, sf0, cf0 = st[0], ct[0], sp[0], cp[0], sf[0], cf[0]
    ax, ay, az = AX[0], AY[0], AZ[0]
    k0 = k[0]
    CL0v, CD0v, CC0v = CL[0], CD[0], CC[0]
    CD_a = 2.0 * KCD * CL0v * CLa
    Cy_a = -CD_a * sb0
    Cy_b = -CD0v * cb0 + CCb * cb0 - CC0v * sb0
    Cz_a = -CD_a * sa0 * cb0 - CD0v * ca0 * cb0 - CC0v * ca0 * sb0 - CLa * ca0 + CL0v * sa0
    Cz_b = CD0v * sa0 * sb0 - CCb * sa0 * sb0 - CC0v * sa0 * cb0
    horiz_t = ct0 * cp0 * ax + ct0 * sp0 * ay - st0 * az
    y_a, y_b = -k0 * Cy_a, -k0 * Cy_b
    y_t = sf0 * horiz_t + G * sf0 * st0
    y_p = (-sf0 * st0 * sp0 - cf0 * cp0) * ax + (sf0 * st0 * cp0 - cf0 * sp0) * ay
    z_a, z_b = -k0 * Cz_a, -k0 * Cz_b
    z_t = cf0 * horiz_t + G * cf0 * st0
    z_p = (-cf0 * st0 * sp0 + sf0 * cp0) * ax + (cf0 * st0 * cp0 + sf0 * sp0) * ay
    az_a = sf0 * ca0 * cb0
    az_b = -cf0 * cb0 - sf0 * sa0 * sb0
    az_p = -ctw[0] * cdp[0]
    el_a = st0 * sa0 * cb0 + ct0 * cf0 * ca0 * cb0
    el_b = st0 * ca0 * sb0 + ct0 * sf0 * cb0 - ct0 * cf0 * sa0 * sb0
    el_t = -ct0 * ca0 * cb0 - st0 * sf0 * sb0 - st0 * cf0 * sa0 * cb0
    if abs(el_t) < det_guard or abs(az_p) < det_guard:
        raise ArithmeticError("flight-path relations are singular in theta or psi")

    th0, th_a, th_b = -rel2 / el_t, -el_a / el_t, -el_b / el_t
    ps0, ps_a, ps_b = -raz2 / az_p, -az_a / az_p, -az_b / az_p
    m11 = y_a + y_t * th_a + y_p * ps_a
    m12 = y_b + y_t * th_b + y_p * ps_b
    m21 = z_a + z_t * th_a + z_p * ps_a
    m22 = z_b + z_t * th_b + z_p * ps_b
    b1 = -(ry2 + y_t * th0 + y_p * ps0)
    b2 = -(rz2 + z_t * th0 + z_p * ps0)
    det = m11 * m22 - m12 * m21
    if abs(det) < det_guard:
        raise ArithmeticError(f"force-balance system is singular (det = {det:.3e})")
    a_dd = (b1 * m22 - m12 * b2) / det
    b_dd = (m11 * b2 - m21 * b1) / det
    t_dd = th0 + th_a * a_dd + th_b * b_dd
    p_dd = ps0 + ps_a * a_dd + ps_b * b_dd

    f1, f2 = PH[1], PH[2]
    p_dot = f2 - ct0 * psd * thd - st0 * p_dd
    q_dot = (-sf0 * thd * f1 + cf0 * t_dd - st0 * sf0 * psd * thd
             + ct0 * cf0 * psd * f1 + ct0 * sf0 * p_dd)
    r_dot = (-st0 * cf0 * psd * thd - ct0 * sf0 * psd * f1
             + ct0 * cf0 * p_dd - cf0 * thd * f1 - sf0 * t_dd)
    return (T_dot, ald, bed, psd, thd, p_dot, q_dot, r_dot, a_dd, b_dd, p_dd, t_dd)
