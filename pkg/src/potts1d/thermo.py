"""Closed-form thermodynamic functions of the chain and their
finite-difference verification engine.

Every function is evaluated through the shared ratio
r = (q-1) e^{2(h+J beta)} / (1 + (q-1) e^{2(h+J beta)}), which is a plain
sigmoid in t = 2(h+J beta) + ln(q-1).  Working with the pair (r, 1-r) and
with tanh(t/2) = 2r - 1 keeps all five quantities finite and mutually
consistent far beyond the range where e^{2(h+J beta)} itself overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams, ThermoState
from .transfer import coupling_exponent, log_dominant_eigenvalue, _log_peak_weight

# Relative-error tolerances the finite-difference report is judged against
# (first derivatives, then second derivatives).
FIRST_DERIVATIVE_TOL = 1e-6
SECOND_DERIVATIVE_TOL = 1e-5

# Default first-derivative step scale; second differences use 10x this.
DEFAULT_FD_STEP = 1e-5

T_TO_ZERO = "T->0"
T_TO_INF = "T->inf"


@dataclass(frozen=True)
class StableCore:
    """The recurring ratio shared by all thermodynamic closed forms.

    x is 2*(h + J*beta); r is the sigmoid of x + ln(q-1).  one_minus_r and
    two_r_minus_one are computed independently of r so no precision is lost
    when r saturates at either end.
    """

    x: float
    r: float
    one_minus_r: float
    two_r_minus_one: float


def _sigmoid(t: float) -> float:
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def stable_core(params: ModelParams, state: ThermoState) -> StableCore:
    x = 2.0 * coupling_exponent(params, state)
    t = x + math.log(params.q - 1)
    return StableCore(
        x=x,
        r=_sigmoid(t),
        one_minus_r=_sigmoid(-t),
        two_r_minus_one=math.tanh(0.5 * t),
    )


@dataclass(frozen=True)
class ThermoPoint:
    """The five thermodynamic functions evaluated at one parameter point."""

    f: float
    S: float
    m: float
    chi: float
    C: float


def free_energy(params: ModelParams, state: ThermoState) -> float:
    """Free energy per site: -log(dominant eigenvalue) / beta."""
    return -log_dominant_eigenvalue(params, state) / state.beta


def entropy(params: ModelParams, state: ThermoState) -> float:
    """Entropy per site, log(lambda_max) + J*beta*(1 - 2r).

    Negative values at low temperature are a genuine feature of this
    convention and are returned unclamped.
    """
    core = stable_core(params, state)
    llm = log_dominant_eigenvalue(params, state)
    return llm - params.J * state.beta * core.two_r_minus_one


def magnetization(params: ModelParams, state: ThermoState) -> float:
    """Magnetization per spin, (2r - 1) / beta; bounded by 1/beta."""
    core = stable_core(params, state)
    return core.two_r_minus_one / state.beta


def magnetization_zero_point(params: ModelParams, state: ThermoState) -> float:
    """The field h* = -(J*beta + ln(q-1)/2) where the magnetization vanishes.

    The susceptibility attains its maximum value 1/beta at the same field.
    """
    return -(params.J * state.beta + 0.5 * math.log(params.q - 1))


def susceptibility(params: ModelParams, state: ThermoState) -> float:
    """Susceptibility 4 r (1-r) / beta, strictly positive and at most 1/beta."""
    core = stable_core(params, state)
    return 4.0 * core.r * core.one_minus_r / state.beta


def heat_capacity(params: ModelParams, state: ThermoState) -> float:
    """Heat capacity per site, J^2 beta^2 * 4 r (1-r); zero exactly when J = 0.

    Computed as J^2 beta^3 times the susceptibility so the two functions
    stay consistent to rounding even where r(1-r) is subnormal.
    """
    return params.J**2 * state.beta**3 * susceptibility(params, state)


def thermo_point(params: ModelParams, state: ThermoState) -> ThermoPoint:
    """All five thermodynamic functions from one shared core evaluation."""
    core = stable_core(params, state)
    llm = log_dominant_eigenvalue(params, state)
    beta = state.beta
    chi = 4.0 * core.r * core.one_minus_r / beta
    return ThermoPoint(
        f=-llm / beta,
        S=llm - params.J * beta * core.two_r_minus_one,
        m=core.two_r_minus_one / beta,
        chi=chi,
        C=params.J**2 * beta**3 * chi,
    )


def asymptotic_entropy_limit(params: ModelParams, direction: str) -> float:
    """Entropy limit for T -> 0 or T -> infinity.

    T -> 0 gives h + ln(q-1) for J > 0 and -h for J < 0; with J = 0 the
    entropy is temperature independent and the T -> infinity value is
    returned.  T -> infinity gives log[(1 + (q-1) e^{2h}) / e^h].
    """
    if direction == T_TO_INF or params.J == 0.0:
        if direction not in (T_TO_ZERO, T_TO_INF):
            raise ValueError(f"unknown direction {direction!r}")
        return _log_peak_weight(params.h, params.q)
    if direction == T_TO_ZERO:
        if params.J > 0.0:
            return params.h + math.log(params.q - 1)
        return -params.h
    raise ValueError(f"unknown direction {direction!r}")


def _free_energy_at_T(params: ModelParams, T: float) -> float:
    return free_energy(params, ThermoState(1.0 / T))


def _free_energy_at_h(params: ModelParams, state: ThermoState, h: float) -> float:
    return free_energy(ModelParams(params.q, params.J, h), state)


@dataclass(frozen=True)
class FdReport:
    """Relative errors of the four closed-form derivatives versus central
    finite differences of the free energy, plus the overall verdict.

    Errors are |closed - fd| / max(|closed|, |fd|, 1), so quantities that
    are identically zero report their absolute error.
    """

    entropy_error: float
    magnetization_error: float
    susceptibility_error: float
    heat_capacity_error: float
    passed: bool

    def errors(self) -> dict[str, float]:
        return {
            "S": self.entropy_error,
            "m": self.magnetization_error,
            "chi": self.susceptibility_error,
            "C": self.heat_capacity_error,
        }


def _rel_error(closed: float, approx: float) -> float:
    return abs(closed - approx) / max(abs(closed), abs(approx), 1.0)


def fd_verify(params: ModelParams, state: ThermoState, step: float = DEFAULT_FD_STEP) -> FdReport:
    """Check S, m, chi and C against finite differences of the free energy.

    First derivatives use a central step of step*max(1, |variable|);
    second derivatives use ten times that.  The step must leave T - step
    positive.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    T = state.T
    h = params.h
    eps_t1 = step * max(1.0, T)
    eps_t2 = 10.0 * step * max(1.0, T)
    eps_h1 = step * max(1.0, abs(h))
    eps_h2 = 10.0 * step * max(1.0, abs(h))
    if T - eps_t2 <= 0.0:
        raise ValueError("step too large: T - step leaves the valid domain")

    f0 = free_energy(params, state)

    s_fd = -(_free_energy_at_T(params, T + eps_t1) - _free_energy_at_T(params, T - eps_t1)) / (2.0 * eps_t1)
    m_fd = -(_free_energy_at_h(params, state, h + eps_h1) - _free_energy_at_h(params, state, h - eps_h1)) / (2.0 * eps_h1)
    chi_fd = -(
        _free_energy_at_h(params, state, h + eps_h2)
        - 2.0 * f0
        + _free_energy_at_h(params, state, h - eps_h2)
    ) / (eps_h2 * eps_h2)
    c_fd = -T * (
        _free_energy_at_T(params, T + eps_t2)
        - 2.0 * f0
        + _free_energy_at_T(params, T - eps_t2)
    ) / (eps_t2 * eps_t2)

    e_s = _rel_error(entropy(params, state), s_fd)
    e_m = _rel_error(magnetization(params, state), m_fd)
    e_chi = _rel_error(susceptibility(params, state), chi_fd)
    e_c = _rel_error(heat_capacity(params, state), c_fd)
    passed = (
        e_s <= FIRST_DERIVATIVE_TOL
        and e_m <= FIRST_DERIVATIVE_TOL
        and e_chi <= SECOND_DERIVATIVE_TOL
        and e_c <= SECOND_DERIVATIVE_TOL
    )
    return FdReport(e_s, e_m, e_chi, e_c, passed)
