"""Model definitions for a one-dimensional q-state chain in which both the
exchange coupling J and the external field h couple to nearest-neighbour
spin agreement.

Each periodic bond contributes -1 to the agreement sum when its two spins
are equal and +1 when they differ.  The field term enters the energy divided
by beta, so Boltzmann bond weights carry h without a beta factor.  The
Boltzmann constant is fixed to 1 throughout, hence T = 1/beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _as_spin_count(q) -> int:
    qf = float(q)
    if not qf.is_integer():
        raise ValueError(f"q must be an integer, got {q!r}")
    qi = int(qf)
    if qi < 2:
        raise ValueError("q must be at least 2")
    return qi


@dataclass(frozen=True)
class ModelParams:
    """The triple (q, J, h) defining one model instance.

    q is the spin-state count (at least 2), J the exchange coupling in
    energy units, h the dimensionless agreement field.
    """

    q: int
    J: float
    h: float

    def __post_init__(self):
        object.__setattr__(self, "q", _as_spin_count(self.q))
        object.__setattr__(self, "J", float(self.J))
        object.__setattr__(self, "h", float(self.h))
        if not math.isfinite(self.J):
            raise ValueError("J must be finite")
        if not math.isfinite(self.h):
            raise ValueError("h must be finite")


@dataclass(frozen=True)
class ThermoState:
    """Inverse temperature beta > 0, with k_B = 1 so that T = 1/beta."""

    beta: float

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValueError("beta must be positive and finite")

    @property
    def T(self) -> float:
        return 1.0 / self.beta

    @classmethod
    def from_temperature(cls, T) -> "ThermoState":
        T = float(T)
        if not (math.isfinite(T) and T > 0.0):
            raise ValueError("T must be positive and finite")
        return cls(1.0 / T)


@dataclass(frozen=True)
class SpinConfig:
    """A periodic chain of N >= 2 spins; site N+1 is identified with site 1."""

    sites: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(int(s) for s in self.sites))
        if len(self.sites) < 2:
            raise ValueError("a periodic chain needs at least 2 sites")
        if any(s < 1 for s in self.sites):
            raise ValueError("spins are 1-based; found a value below 1")

    def __len__(self) -> int:
        return len(self.sites)


def kronecker_interaction(s1: int, s2: int, q: int | None = None) -> float:
    """Agreement factor of one bond: -1.0 if the spins match, +1.0 otherwise.

    Spins are 1-based labels.  When q is given the labels are checked
    against the full range 1..q, otherwise only positivity is enforced.
    """
    for s in (s1, s2):
        if int(s) != s or int(s) < 1 or (q is not None and int(s) > q):
            hi = q if q is not None else "q"
            raise ValueError(f"spin {s!r} outside 1..{hi}")
    return -1.0 if s1 == s2 else 1.0


def config_energy(config: SpinConfig, params: ModelParams, state: ThermoState) -> float:
    """Energy of a periodic configuration: -(J + h/beta) times the agreement sum.

    exp(-beta * E) equals the product of bond_weight over all N periodic
    bonds, which is the identity the enumeration oracle relies on.
    """
    n = len(config)
    agreement = 0.0
    for i, s in enumerate(config.sites):
        agreement += kronecker_interaction(s, config.sites[(i + 1) % n], params.q)
    return -(params.J + params.h / state.beta) * agreement


def bond_weight(s1: int, s2: int, params: ModelParams, state: ThermoState) -> float:
    """Boltzmann weight of one bond: exp((beta*J + h) * agreement factor).

    Equal spins give exp(-(beta*J + h)), unequal spins exp(+(beta*J + h)).
    """
    w = state.beta * params.J + params.h
    return math.exp(w * kronecker_interaction(s1, s2, params.q))
