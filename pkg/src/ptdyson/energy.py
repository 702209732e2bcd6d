"""Decoupled driver coefficients and real instantaneous energies.

On the closed-form map trajectory the Hermitian counterpart splits into two
independent oscillators, h(t) = f_plus(t) K1 + f_minus(t) K2 with

    f_pm = a +- q3 sqrt(1 - q3^2) lam / (1 + cosh(2 q2 - 2 L) - 2 q3^2),

whose denominator is bounded below by 2 (1 - q3^2) > 0.  Each half drives a
single-mode wavefunction (modes module); the energy expectation of the
product state is then the real closed form

    E = f_plus (n + 1/2) sqrt(1 + ktp^2) + f_minus (m + 1/2) sqrt(1 + ktm^2),

with ktp, ktm the scale constants of the two mode channels.  The quadrature
and matrix-backend evaluations of the same number live in the tests and the
fock_oracle module; this module only carries the closed forms.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra_u2 import AlgebraElement
from .dyson import EPConstants, nonhermitian_hamiltonian
from .errors import ConstraintViolationError


@dataclass(frozen=True)
class Scenario:
    """A complete time-dependent run: profiles, map constants, mode numbers.

    q1 is the free constant pair of map parameters (cancels everywhere; kept
    for completeness), (q2, q3) pick the closed-form trajectory, ktilde_plus
    and ktilde_minus the scale constants of the two mode channels, (n, m)
    the quantum numbers of the product state.
    """

    a: object
    lam: object
    q2: float
    q3: float
    q1: float = 0.0
    ktilde_plus: float = 0.0
    ktilde_minus: float = 0.0
    n: int = 0
    m: int = 0

    def __post_init__(self):
        if not abs(self.q3) < 1.0:
            raise ConstraintViolationError(
                f"|q3| < 1 required, got q3 = {self.q3}"
            )
        if self.n < 0 or self.m < 0:
            raise ConstraintViolationError("quantum numbers must be >= 0")

    def ep_constants(self):
        return EPConstants(q2=self.q2, q3=self.q3)

    def t_max(self):
        return min(self.a.t_max, self.lam.t_max)


def f_pm(scenario, t):
    """The two driver coefficients (f_plus, f_minus) at time t.

    f_plus + f_minus = 2 a(t) identically; the splitting is proportional
    to lam and vanishes for q3 = 0.
    """
    q3 = scenario.q3
    u = scenario.q2 - np.asarray(scenario.lam.cumulative(t))
    denom = 1.0 + np.cosh(2.0 * u) - 2.0 * q3**2
    split = q3 * np.sqrt(1.0 - q3**2) * np.asarray(scenario.lam(t)) / denom
    a_t = np.asarray(scenario.a(t))
    f_plus = a_t + split
    f_minus = a_t - split
    if np.shape(u):
        return f_plus, f_minus
    return float(f_plus), float(f_minus)


def driver_diff_integral(scenario, t):
    """Integral from 0 to t of f_plus - f_minus, in closed form.

    Antiderivative of the splitting: with kappa = q3/sqrt(1 - q3^2) and
    u(tau) = q2 - L(tau), the primitive is -arctan[kappa tanh(u)].
    """
    kappa = scenario.q3 / np.sqrt(1.0 - scenario.q3**2)

    def primitive(tau):
        u = scenario.q2 - np.asarray(scenario.lam.cumulative(tau))
        return -np.arctan(kappa * np.tanh(u))

    out = primitive(t) - primitive(0.0)
    return out if np.shape(out) else float(out)


class DriverHalf:
    """One of the two split drivers, shaped like a TimeProfile.

    Provides __call__, derivative and cumulative so the modes module can
    consume f_plus or f_minus wherever a profile is expected.  cumulative
    uses the closed-form antiderivative of the splitting, not quadrature.
    """

    def __init__(self, scenario, sign):
        if sign not in (+1, -1):
            raise ConstraintViolationError("driver sign must be +1 or -1")
        self.scenario = scenario
        self.sign = sign
        self.t_max = scenario.t_max()

    def __call__(self, t):
        fp, fm = f_pm(self.scenario, t)
        return fp if self.sign > 0 else fm

    evaluate = __call__

    def derivative(self, t):
        s = self.scenario
        q3 = s.q3
        u = s.q2 - np.asarray(s.lam.cumulative(t))
        lam_t = np.asarray(s.lam(t))
        lamdot = np.asarray(s.lam.derivative(t))
        denom = 2.0 * (np.cosh(u) ** 2 - q3**2)
        # d/dt[lam/denom]: denom carries du/dt = -lam, so its derivative is
        # -2 lam sinh(2u).
        split_dot = q3 * np.sqrt(1.0 - q3**2) * (
            lamdot / denom + 2.0 * lam_t**2 * np.sinh(2.0 * u) / denom**2
        )
        out = np.asarray(s.a.derivative(t)) + self.sign * split_dot
        return out if np.shape(out) else float(out)

    def cumulative(self, t):
        s = self.scenario
        base = np.asarray(s.a.cumulative(t))
        out = base + 0.5 * self.sign * np.asarray(driver_diff_integral(s, t))
        return out if np.shape(out) else float(out)


def f_plus_profile(scenario):
    return DriverHalf(scenario, +1)


def f_minus_profile(scenario):
    return DriverHalf(scenario, -1)


def scenario_h(scenario, t):
    """The Hermitian counterpart h(t) = f_plus K1 + f_minus K2."""
    fp, fm = f_pm(scenario, t)
    return AlgebraElement([fp, fm, 0.0, 0.0])


def scenario_hamiltonian(scenario, t):
    """The non-Hermitian model H(t) at time t."""
    return nonhermitian_hamiltonian(float(scenario.a(t)), float(scenario.lam(t)))


def energy_expectation(scenario, t):
    """Real instantaneous energy of the (n, m) product state at time t."""
    fp, fm = f_pm(scenario, t)
    e_plus = (scenario.n + 0.5) * np.sqrt(1.0 + scenario.ktilde_plus**2)
    e_minus = (scenario.m + 0.5) * np.sqrt(1.0 + scenario.ktilde_minus**2)
    out = fp * e_plus + fm * e_minus
    return out if np.shape(np.asarray(out)) else float(out)
