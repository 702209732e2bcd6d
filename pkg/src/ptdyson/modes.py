"""Exact single-mode wavefunctions for a driven oscillator, and 2D products.

For a Hamiltonian d(t) K with K = (p^2 + x^2)/2 and any real driver d(t),
the time-dependent Schroedinger equation is solved exactly by

    mode_n(x, t) = e^{i phase_n(t)} / sqrt(kt(t))
                   * exp[ ( i ktdot/(d kt) - 1/kt^2 ) x^2 / 2 ]
                   * H_n(x / kt) / sqrt(2^n n! sqrt(pi)),

where the scale function kt(t) obeys the auxiliary equation

    ktdotdot - (ddot/d) ktdot + d^2 kt = d^2 / kt^3

and phase_n = -(n + 1/2) * integral of d / kt^2.  With A(t) the cumulative
driver integral, the closed-form scale

    kt = sqrt( ktilde cos(2 A) + sqrt(1 + ktilde^2) )

solves the auxiliary equation for any constant ktilde and stays strictly
positive.  The ratio ktdot/(d kt) reduces to -ktilde sin(2A)/kt^2, so the
mode itself never divides by the driver; the evaluation contract still
rejects driver zeros since the generic ansatz is singular there.

The phase integral has the closed form arctan[g tan(A)] with
g = sqrt((r - ktilde)/(r + ktilde)), r = sqrt(1 + ktilde^2), unwrapped
branch-safely; note g's defining products satisfy r^2 - ktilde^2 = 1, which
is why no prefactor appears.

The 2D solutions of h(t) = f_plus K1 + f_minus K2 are plain products of one
mode per axis with the split drivers of the energy module.
"""

import math
from dataclasses import dataclass

import numpy as np

from .energy import f_minus_profile, f_plus_profile
from .errors import ConstraintViolationError, SingularEvaluationError, UnsupportedDegreeError

MAX_HERMITE_DEGREE = 60

# Driver magnitude below which mode evaluation counts as singular.
EPS_DRIVER = 1e-8


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence."""
    if n < 0 or int(n) != n:
        raise UnsupportedDegreeError(f"degree must be a nonnegative integer, got {n}")
    if n > MAX_HERMITE_DEGREE:
        raise UnsupportedDegreeError(
            f"degree {n} above cap {MAX_HERMITE_DEGREE}"
        )
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=float)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if np.ndim(h) else float(h)


@dataclass(frozen=True)
class ModeSpec:
    """One mode channel: quantum number, driver profile, scale constant.

    channel is a cosmetic tag ('+' or '-') naming which split driver the
    spec belongs to in a 2D product.
    """

    n: int
    driver: object
    ktilde: float
    channel: str = "+"

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ConstraintViolationError("mode number must be an integer >= 0")
        if self.channel not in ("+", "-"):
            raise ConstraintViolationError("channel tag must be '+' or '-'")


def ep_classical(ktilde, driver, t):
    """Closed-form scale function kt(t); strictly positive for any ktilde."""
    a_int = np.asarray(driver.cumulative(t))
    val = np.sqrt(ktilde * np.cos(2.0 * a_int) + np.sqrt(1.0 + ktilde**2))
    return val if val.ndim else float(val)


def ep_classical_rate(ktilde, driver, t):
    """Analytic d/dt of the closed-form scale function."""
    a_int = np.asarray(driver.cumulative(t))
    kt = np.sqrt(ktilde * np.cos(2.0 * a_int) + np.sqrt(1.0 + ktilde**2))
    out = -ktilde * np.asarray(driver(t)) * np.sin(2.0 * a_int) / kt
    return out if out.ndim else float(out)


def ep_oscillator_residual(scale_fn, driver, t, fd_step=1e-2):
    """Residual of the auxiliary scale equation at time t.

    |ktdotdot - (ddot/d) ktdot + d^2 kt - d^2 / kt^3| with derivatives of
    the callable by 4th-order central differences.  Raises
    SingularEvaluationError where the driver magnitude is below EPS_DRIVER.
    """
    d_t = float(driver(t))
    if abs(d_t) <= EPS_DRIVER:
        raise SingularEvaluationError(
            f"driver magnitude {abs(d_t):.2e} <= {EPS_DRIVER} at t = {t}"
        )
    h = fd_step
    stencil = np.array([scale_fn(t + k * h) for k in (-2, -1, 0, 1, 2)], dtype=float)
    kt = stencil[2]
    d1 = (stencil[0] - 8 * stencil[1] + 8 * stencil[3] - stencil[4]) / (12 * h)
    d2 = (
        -stencil[0] + 16 * stencil[1] - 30 * stencil[2]
        + 16 * stencil[3] - stencil[4]
    ) / (12 * h**2)
    ddot = float(driver.derivative(t))
    res = d2 - (ddot / d_t) * d1 + d_t**2 * kt - d_t**2 / kt**3
    return abs(res)


def ermakov_quantity(scale_fn, driver, t, rate_fn=None, fd_step=1e-3):
    """The conserved combination [d^2 (1 + kt^4) + kt^2 ktdot^2] / (d^2 kt^2).

    Constant along any solution of the auxiliary equation; equals
    2 sqrt(1 + ktilde^2) on the closed-form scale.  The rate is analytic
    when rate_fn is given, otherwise a central difference.
    """
    d_t = float(driver(t))
    if abs(d_t) <= EPS_DRIVER:
        raise SingularEvaluationError(
            f"driver magnitude {abs(d_t):.2e} <= {EPS_DRIVER} at t = {t}"
        )
    kt = float(scale_fn(t))
    if rate_fn is not None:
        rate = float(rate_fn(t))
    else:
        h = fd_step
        rate = (
            float(scale_fn(t - 2 * h)) - 8 * float(scale_fn(t - h))
            + 8 * float(scale_fn(t + h)) - float(scale_fn(t + 2 * h))
        ) / (12 * h)
    return (d_t**2 * (1.0 + kt**4) + kt**2 * rate**2) / (d_t**2 * kt**2)


def phase_integral(ktilde, driver, t):
    """Integral from 0 to t of driver / kt^2, in closed form.

    Substituting theta = A(t) gives integrand 1/(ktilde cos(2 theta) + r);
    the primitive arctan[g tan(theta)] is unwrapped by shifting theta to
    its nearest multiple of pi and adding the winding back.
    """
    r = np.sqrt(1.0 + ktilde**2)
    g = np.sqrt((r - ktilde) / (r + ktilde))
    theta = np.asarray(driver.cumulative(t), dtype=float)
    winding = np.round(theta / np.pi)
    reduced = theta - winding * np.pi
    out = winding * np.pi + np.arctan2(g * np.sin(reduced), np.cos(reduced))
    return out if out.ndim else float(out)


def pedrosa_mode(spec, x, t):
    """The normalized n-th mode at position(s) x and time t.

    Unit L2 norm for every t; solves i d/dt psi = driver(t) K psi.  Raises
    SingularEvaluationError when the driver vanishes at t (the generic
    ansatz divides by it, even though the closed-form scale cancels the
    division analytically).
    """
    d_t = float(spec.driver(t))
    if abs(d_t) <= EPS_DRIVER:
        raise SingularEvaluationError(
            f"driver magnitude {abs(d_t):.2e} <= {EPS_DRIVER} at t = {t}"
        )
    x = np.asarray(x, dtype=float)
    kt = ep_classical(spec.ktilde, spec.driver, t)
    a_int = float(spec.driver.cumulative(t))
    # i ktdot/(d kt) - 1/kt^2 with the driver cancelled from the ratio.
    width = (-1.0j * spec.ktilde * np.sin(2.0 * a_int) - 1.0) / kt**2
    phase = -(spec.n + 0.5) * phase_integral(spec.ktilde, spec.driver, t)
    norm = math.sqrt(2.0**spec.n * math.factorial(spec.n) * math.sqrt(math.pi))
    out = (
        np.exp(1.0j * phase)
        / np.sqrt(kt)
        * np.exp(0.5 * width * x**2)
        * hermite(spec.n, x / kt)
        / norm
    )
    return out if out.ndim else complex(out)


def pedrosa_mode_xx(spec, x, t):
    """Second x-derivative of pedrosa_mode, analytic.

    For psi = C exp(W x^2 / 2) H_n(x/kt):
    psi'' = C exp(W x^2/2) [ (W + W^2 x^2) H_n
                             + (4 n W x / kt) H_{n-1}
                             + (4 n (n-1) / kt^2) H_{n-2} ].
    Used by the quadrature oracles; a grid check would lose too many digits.
    """
    d_t = float(spec.driver(t))
    if abs(d_t) <= EPS_DRIVER:
        raise SingularEvaluationError(
            f"driver magnitude {abs(d_t):.2e} <= {EPS_DRIVER} at t = {t}"
        )
    x = np.asarray(x, dtype=float)
    n = spec.n
    kt = ep_classical(spec.ktilde, spec.driver, t)
    a_int = float(spec.driver.cumulative(t))
    width = (-1.0j * spec.ktilde * np.sin(2.0 * a_int) - 1.0) / kt**2
    phase = -(n + 0.5) * phase_integral(spec.ktilde, spec.driver, t)
    norm = math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))
    pref = np.exp(1.0j * phase) / np.sqrt(kt) / norm * np.exp(0.5 * width * x**2)
    xi = x / kt
    total = (width + width**2 * x**2) * hermite(n, xi)
    if n >= 1:
        total = total + (4.0 * n * width * x / kt) * hermite(n - 1, xi)
    if n >= 2:
        total = total + (4.0 * n * (n - 1) / kt**2) * hermite(n - 2, xi)
    out = pref * total
    return out if out.ndim else complex(out)


def k1_expectation(spec):
    """Expectation of the oscillator generator in the n-th mode.

    (n + 1/2) sqrt(1 + ktilde^2), constant in time.
    """
    return (spec.n + 0.5) * np.sqrt(1.0 + spec.ktilde**2)


def product_state(n, m, scenario, x, y, t):
    """The 2D solution for h(t): one mode per axis with the split drivers.

    x and y must broadcast against each other (pass meshgrid arrays for a
    grid evaluation).
    """
    spec_x = ModeSpec(n, f_plus_profile(scenario), scenario.ktilde_plus, "+")
    spec_y = ModeSpec(m, f_minus_profile(scenario), scenario.ktilde_minus, "-")
    return pedrosa_mode(spec_x, x, t) * pedrosa_mode(spec_y, y, t)
