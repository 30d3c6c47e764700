"""Rigid-body flight mechanics relations.

All functions take positional scalars and are written with the generic
elementary functions of :mod:`invsim.jet`, so they evaluate equally on
floats, numpy arrays and :class:`~invsim.jet.Jet2` jets.  Angles are in
radians, the inertial frame is north-east-down and Euler angles follow the
yaw-pitch-roll (3-2-1) sequence.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .airframe import AirframeParams
from .atmosphere import G
from .errors import SingularityError
from .jet import atan2, sincos, sqrt, tan

__all__ = [
    "body_rates_from_euler", "body_accels_from_euler", "euler_rates_from_body",
    "auxiliary_moments", "auxiliary_moments_from_accels", "auxiliary_moment_T3_closed_form",
    "rotational_accels", "rotational_accels_symmetric", "moments_from_auxiliary",
    "speed_rate", "alpha_rate", "beta_rate", "thrust_explicit",
    "flight_path_angles", "flight_path_rates", "inertial_velocity",
    "flight_path_residuals", "flight_path_partials", "euler_rates_from_flight_path",
    "euler_accels_from_flight_path", "force_balance_residuals", "force_balance_partials",
    "dcm_inertial_to_body", "FlightPathPartials", "ForceBalancePartials",
]


# --- rotational kinematics --------------------------------------------------

def body_rates_from_euler(phi, theta, phi_dot, theta_dot, psi_dot):
    """Body angular rates ``(p, q, r)`` from Euler angles and their rates."""
    sf, cf = sincos(phi)
    st, ct = sincos(theta)
    p = phi_dot - st * psi_dot
    q = cf * theta_dot + ct * sf * psi_dot
    r = ct * cf * psi_dot - sf * theta_dot
    return p, q, r


def body_accels_from_euler(phi, theta, phi_dot, theta_dot, psi_dot,
                           phi_ddot, theta_ddot, psi_ddot):
    """Time derivatives of the body rates, ``(p_dot, q_dot, r_dot)``."""
    sf, cf = sincos(phi)
    st, ct = sincos(theta)
    p_dot = phi_ddot - ct * psi_dot * theta_dot - st * psi_ddot
    q_dot = (-sf * theta_dot * phi_dot + cf * theta_ddot - st * sf * psi_dot * theta_dot
             + ct * cf * psi_dot * phi_dot + ct * sf * psi_ddot)
    r_dot = (-st * cf * psi_dot * theta_dot - ct * sf * psi_dot * phi_dot
             + ct * cf * psi_ddot - cf * theta_dot * phi_dot - sf * theta_ddot)
    return p_dot, q_dot, r_dot


def euler_rates_from_body(phi, theta, p, q, r):
    """Euler-angle rates ``(phi_dot, theta_dot, psi_dot)`` from body rates."""
    sf, cf = sincos(phi)
    tt = tan(theta)
    _, ct = sincos(theta)
    phi_dot = p + q * tt * sf + r * tt * cf
    theta_dot = q * cf - r * sf
    psi_dot = (r * cf + q * sf) / ct
    return phi_dot, theta_dot, psi_dot


# --- rotational dynamics ----------------------------------------------------

def auxiliary_moments(params: AirframeParams, p, q, r, L, M, N):
    """Auxiliary moments: applied moment plus gyroscopic and product terms."""
    A, B, C, D, E, F = params.A, params.B, params.C, params.D, params.E, params.F
    T1 = (B - C) * q * r + (E * q - F * r) * p + (q * q - r * r) * D + L
    T2 = (C - A) * r * p + (F * r - D * p) * q + (r * r - p * p) * E + M
    T3 = (A - B) * p * q + (D * p - E * q) * r + (p * p - q * q) * F + N
    return T1, T2, T3


def rotational_accels(params: AirframeParams, p, q, r, L, M, N):
    """Angular accelerations ``(p_dot, q_dot, r_dot)`` for a general inertia tensor."""
    T1, T2, T3 = auxiliary_moments(params, p, q, r, L, M, N)
    k = params.inertia
    p_dot = (k.BC_D2 * T1 + k.FC_ED * T2 + k.FD_EB * T3) / k.T0
    q_dot = (k.AC_E2 * T2 + k.AD_EF * T3 + k.FC_ED * T1) / k.T0
    r_dot = (k.AB_F2 * T3 + k.FD_EB * T1 + k.AD_EF * T2) / k.T0
    return p_dot, q_dot, r_dot


def rotational_accels_symmetric(params: AirframeParams, p, q, r, L, M, N):
    """Angular accelerations for an airframe symmetric about its x-z plane."""
    if not params.is_symmetric:
        raise ValueError("symmetric form requires D = F = 0")
    A, B, C, E = params.A, params.B, params.C, params.E
    den = A * C - E * E
    p_dot = (C * L + E * N + (A - B + C) * E * p * q + ((B - C) * C - E * E) * q * r) / den
    q_dot = (M + (C - A) * p * r + E * (r * r - p * p)) / B
    r_dot = (E * L + A * N + ((A - B) * A + E * E) * p * q + (B - A - C) * E * q * r) / den
    return p_dot, q_dot, r_dot


def auxiliary_moments_from_accels(params: AirframeParams, p_dot, q_dot, r_dot):
    """Auxiliary moments implied by given angular accelerations.

    This is the inertia tensor applied to the angular-acceleration vector,
    the exact inverse of the solve in :func:`rotational_accels`.
    """
    A, B, C, D, E, F = params.A, params.B, params.C, params.D, params.E, params.F
    T1 = A * p_dot - F * q_dot - E * r_dot
    T2 = -F * p_dot + B * q_dot - D * r_dot
    T3 = -E * p_dot - D * q_dot + C * r_dot
    return T1, T2, T3


def auxiliary_moment_T3_closed_form(params: AirframeParams, p_dot, q_dot, r_dot,
                                    corrected: bool = True):
    """Third auxiliary moment from the published closed-form fraction.

    The fraction's denominator is meant to equal ``-T0``.  As printed it
    carries ``-E^2 B`` where ``+E^2 B`` is required; ``corrected=False``
    reproduces the printed form, which is exact only when ``B E^2 = 0``.
    """
    A, B, C, D, E, F = params.A, params.B, params.C, params.D, params.E, params.F
    sign = 1.0 if corrected else -1.0
    den = A * D * D + 2.0 * D * E * F - A * C * B + F * F * C + sign * E * E * B
    return params.inertia.T0 * (q_dot * D - r_dot * C + p_dot * E) / den


def moments_from_auxiliary(params: AirframeParams, p, q, r, T1, T2, T3):
    """Applied body moments ``(L, M, N)`` from auxiliary moments."""
    A, B, C, D, E, F = params.A, params.B, params.C, params.D, params.E, params.F
    L = T1 - (B - C) * q * r - (E * q - F * r) * p - (q * q - r * r) * D
    M = T2 - (C - A) * r * p - (F * r - D * p) * q - (r * r - p * p) * E
    N = T3 - (A - B) * p * q - (D * p - E * q) * r - (p * p - q * q) * F
    return L, M, N


# --- translational dynamics in wind axes -------------------------------------

def _gravity_terms(alpha, beta, theta, phi):
    sa, ca = sincos(alpha)
    sb, cb = sincos(beta)
    st, ct = sincos(theta)
    sf, cf = sincos(phi)
    return sa, ca, sb, cb, st, ct, sf, cf


def speed_rate(params: AirframeParams, V, alpha, beta, theta, phi, coeffs, qbar, thrust):
    """Airspeed derivative from the along-velocity momentum balance."""
    sa, ca, sb, cb, st, ct, sf, cf = _gravity_terms(alpha, beta, theta, phi)
    m = params.m
    aero = qbar * params.S * (coeffs.Cx * ca * cb + coeffs.Cy * sb + coeffs.Cz * sa * cb)
    grav = m * G * (ct * sf * sb - st * ca * cb + ct * cf * sa * cb)
    return (aero + grav + thrust * ca * cb) / m


def thrust_explicit(params: AirframeParams, alpha, beta, theta, phi, coeffs, V_dot, qbar):
    """Thrust required for a prescribed airspeed derivative ``V_dot``."""
    sa, ca, sb, cb, st, ct, sf, cf = _gravity_terms(alpha, beta, theta, phi)
    m = params.m
    aero = qbar * params.S * (coeffs.Cx * ca * cb + coeffs.Cy * sb + coeffs.Cz * sa * cb)
    grav = m * G * (ct * sf * sb - st * ca * cb + ct * cf * sa * cb)
    return (m * V_dot - aero - grav) / (ca * cb)


def alpha_rate(params: AirframeParams, V, alpha, beta, theta, phi, coeffs, qbar, thrust, p, q, r):
    """Angle-of-attack derivative from the normal momentum balance."""
    sa, ca, sb, cb, st, ct, sf, cf = _gravity_terms(alpha, beta, theta, phi)
    m = params.m
    num = (qbar * params.S * (coeffs.Cz * ca - coeffs.Cx * sa)
           + m * G * (st * sa + ct * cf * ca) - thrust * sa
           + m * V * (q * cb - r * sa * sb - p * ca * sb))
    return num / (m * V * cb)


def beta_rate(params: AirframeParams, V, alpha, beta, theta, phi, coeffs, qbar, thrust, p, r,
              printed_thrust_sign: bool = False):
    """Sideslip derivative from the lateral momentum balance.

    Thrust acts along the body x axis, so its contribution is
    ``-T cos(alpha) sin(beta)``, the same projection applied to the axial
    aerodynamic force.  The commonly printed form of this relation carries
    ``+T cos(alpha) sin(beta)``; ``printed_thrust_sign=True`` reproduces it
    for comparison.
    """
    sa, ca, sb, cb, st, ct, sf, cf = _gravity_terms(alpha, beta, theta, phi)
    m = params.m
    t_sign = 1.0 if printed_thrust_sign else -1.0
    num = (qbar * params.S * (coeffs.Cy * cb - coeffs.Cx * ca * sb - coeffs.Cz * sa * sb)
           + m * G * (ct * sf * cb + st * ca * sb - ct * cf * sa * sb)
           + t_sign * thrust * ca * sb + m * V * (-r * ca + p * sa))
    return num / (m * V)


# --- flight path --------------------------------------------------------------

def flight_path_angles(x_dot, y_dot, z_dot):
    """Airspeed and flight-path angles ``(V, psi_w, theta_w)`` from inertial velocity.

    The azimuth uses the four-quadrant arctangent.
    """
    horiz = sqrt(x_dot * x_dot + y_dot * y_dot)
    V = sqrt(x_dot * x_dot + y_dot * y_dot + z_dot * z_dot)
    return V, atan2(y_dot, x_dot), atan2(-z_dot, horiz)


def flight_path_rates(x_dot, y_dot, z_dot, x_ddot, y_ddot, z_ddot):
    """First derivatives ``(V_dot, psi_w_dot, theta_w_dot)`` of speed and path angles."""
    V, _, theta_w = flight_path_angles(x_dot, y_dot, z_dot)
    V_dot = (x_dot * x_ddot + y_dot * y_ddot + z_dot * z_ddot) / V
    psi_w_dot = (y_ddot * x_dot - x_ddot * y_dot) / (x_dot * x_dot + y_dot * y_dot)
    st, ct = sincos(theta_w)
    theta_w_dot = -(z_ddot + V_dot * st) / (V * ct)
    return V_dot, psi_w_dot, theta_w_dot


def inertial_velocity(V, alpha, beta, phi, theta, psi):
    """Inertial velocity components of the body-axis velocity vector."""
    sa, ca = sincos(alpha)
    sb, cb = sincos(beta)
    u, v, w = V * ca * cb, V * sb, V * sa * cb
    R = dcm_inertial_to_body(phi, theta, psi)
    return (R[0][0] * u + R[1][0] * v + R[2][0] * w,
            R[0][1] * u + R[1][1] * v + R[2][1] * w,
            R[0][2] * u + R[1][2] * v + R[2][2] * w)


def dcm_inertial_to_body(phi, theta, psi):
    """Rotation matrix taking inertial components to body components (rows)."""
    sf, cf = sincos(phi)
    st, ct = sincos(theta)
    sp, cp = sincos(psi)
    return ((ct * cp, ct * sp, -st),
            (sf * st * cp - cf * sp, sf * st * sp + cf * cp, sf * ct),
            (cf * st * cp + sf * sp, cf * st * sp - sf * cp, cf * ct))


def flight_path_residuals(alpha, beta, phi, theta, psi, theta_w, psi_w):
    """Residuals (left minus right) of the two relations tying the body
    attitude to the flight-path angles: azimuth then elevation."""
    sa, ca = sincos(alpha)
    sb, cb = sincos(beta)
    sf, cf = sincos(phi)
    st, ct = sincos(theta)
    stw, ctw = sincos(theta_w)
    s_dpsi, _ = sincos(psi_w - psi)
    res_az = ctw * s_dpsi - (cf * sb - sf * sa * cb)
    res_el = stw - (st * ca * cb - ct * sf * sb - ct * cf * sa * cb)
    return res_az, res_el


class FlightPathPartials(NamedTuple):
    """Partials of the azimuth residual (``az_*``) and elevation residual
    (``el_*``) with respect to alpha, beta, theta and psi."""

    az_alpha: float
    az_beta: float
    az_psi: float
    el_alpha: float
    el_beta: float
    el_theta: float


def flight_path_partials(alpha, beta, phi, theta, psi, theta_w, psi_w) -> FlightPathPartials:
    """Analytic partial derivatives of :func:`flight_path_residuals` (floats).

    The azimuth residual does not depend on theta and the elevation residual
    does not depend on psi.
    """
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    sf, cf = math.sin(phi), math.cos(phi)
    st, ct = math.sin(theta), math.cos(theta)
    return FlightPathPartials(
        az_alpha=sf * ca * cb,
        az_beta=-cf * cb - sf * sa * sb,
        az_psi=-math.cos(theta_w) * math.cos(psi_w - psi),
        el_alpha=st * sa * cb + ct * cf * ca * cb,
        el_beta=st * ca * sb + ct * sf * cb - ct * cf * sa * sb,
        el_theta=-ct * ca * cb - st * sf * sb - st * cf * sa * cb,
    )


def _require(value, guard, what):
    if abs(value) < guard:
        raise SingularityError(f"{what} is singular (|coefficient| = {abs(value):.3e} < {guard:g})")


def euler_rates_from_flight_path(alpha, beta, phi, theta, psi, theta_w, psi_w,
                                 alpha_dot, beta_dot, phi_dot, theta_w_dot, psi_w_dot,
                                 det_guard: float = 1e-8):
    """Rates ``(theta_dot, psi_dot)`` implied by the flight-path relations.

    The relations are differentiated once and solved for the two unknown
    Euler-angle rates.  The 2x2 system is diagonal because the azimuth
    relation does not involve theta and the elevation relation does not
    involve psi.
    """
    from .jet import Jet2

    res = flight_path_residuals(Jet2(alpha, alpha_dot), Jet2(beta, beta_dot),
                                Jet2(phi, phi_dot), Jet2(theta, 0.0), Jet2(psi, 0.0),
                                Jet2(theta_w, theta_w_dot), Jet2(psi_w, psi_w_dot))
    P = flight_path_partials(alpha, beta, phi, theta, psi, theta_w, psi_w)
    _require(P.az_psi * P.el_theta, det_guard, "flight-path rate system")
    return -res[1].d1 / P.el_theta, -res[0].d1 / P.az_psi


def euler_accels_from_flight_path(alpha, beta, phi, theta, psi, theta_w, psi_w,
                                  rates, alpha_ddot, beta_ddot, det_guard: float = 1e-8):
    """Second derivatives ``(theta_ddot, psi_ddot)`` implied by the flight-path relations.

    ``rates`` holds ``(alpha_dot, beta_dot, theta_dot, psi_dot, phi_dot,
    phi_ddot, theta_w_dot, theta_w_ddot, psi_w_dot, psi_w_ddot)``.
    """
    from .jet import Jet2

    (a1, b1, t1, s1, f1, f2, tw1, tw2, pw1, pw2) = rates
    res = flight_path_residuals(Jet2(alpha, a1, alpha_ddot), Jet2(beta, b1, beta_ddot),
                                Jet2(phi, f1, f2), Jet2(theta, t1, 0.0), Jet2(psi, s1, 0.0),
                                Jet2(theta_w, tw1, tw2), Jet2(psi_w, pw1, pw2))
    P = flight_path_partials(alpha, beta, phi, theta, psi, theta_w, psi_w)
    _require(P.az_psi * P.el_theta, det_guard, "flight-path acceleration system")
    return -res[1].d2 / P.el_theta, -res[0].d2 / P.az_psi


# --- body-axis force balance ---------------------------------------------------

def force_balance_residuals(params: AirframeParams, alpha, beta, phi, theta, psi,
                            accel, qbar, alpha_equb, coeffs=None):
    """Lateral and normal body-axis force balance per unit mass.

    ``accel`` is the inertial acceleration ``(x_ddot, y_ddot, z_ddot)``.
    Thrust acts along the body x axis and so drops out of both residuals.
    Returns ``(res_y, res_z)`` in m/s^2.
    """
    from .airframe import force_coefficients

    ax, ay, az = accel
    sf, cf = sincos(phi)
    st, ct = sincos(theta)
    sp, cp = sincos(psi)
    k = qbar * (params.S / params.m)
    co = coeffs if coeffs is not None else force_coefficients(params, alpha, beta, alpha_equb)
    sfst = sf * st
    cfst = cf * st
    a_y = (sfst * cp - cf * sp) * ax + (sfst * sp + cf * cp) * ay + sf * ct * az
    a_z = (cfst * cp + sf * sp) * ax + (cfst * sp - sf * cp) * ay + cf * ct * az
    res_y = a_y - G * sf * ct - k * co.Cy
    res_z = a_z - G * cf * ct - k * co.Cz
    return res_y, res_z


class ForceBalancePartials(NamedTuple):
    y_alpha: float
    y_beta: float
    y_theta: float
    y_psi: float
    z_alpha: float
    z_beta: float
    z_theta: float
    z_psi: float


def force_balance_partials(params: AirframeParams, alpha, beta, phi, theta, psi,
                           accel, qbar, alpha_equb) -> ForceBalancePartials:
    """Analytic partials of :func:`force_balance_residuals` (floats)."""
    ax, ay, az = accel
    sa, ca = math.sin(alpha), math.cos(alpha)
    sb, cb = math.sin(beta), math.cos(beta)
    sf, cf = math.sin(phi), math.cos(phi)
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(psi), math.cos(psi)
    k = qbar * params.S / params.m
    CL = params.CL0 + params.CLa * (alpha + alpha_equb)
    CD = params.CD0 + params.KCD * CL * CL
    CC = params.CCb * beta
    CD_a = 2.0 * params.KCD * CL * params.CLa
    Cy_a = -CD_a * sb
    Cy_b = -CD * cb + params.CCb * cb - CC * sb
    Cz_a = -CD_a * sa * cb - CD * ca * cb - CC * ca * sb - params.CLa * ca + CL * sa
    Cz_b = CD * sa * sb - params.CCb * sa * sb - CC * sa * cb
    horiz_t = ct * cp * ax + ct * sp * ay - st * az
    return ForceBalancePartials(
        y_alpha=-k * Cy_a,
        y_beta=-k * Cy_b,
        y_theta=sf * horiz_t + G * sf * st,
        y_psi=(-sf * st * sp - cf * cp) * ax + (sf * st * cp - cf * sp) * ay,
        z_alpha=-k * Cz_a,
        z_beta=-k * Cz_b,
        z_theta=cf * horiz_t + G * cf * st,
        z_psi=(-cf * st * sp + sf * cp) * ax + (cf * st * cp + sf * sp) * ay,
    )
