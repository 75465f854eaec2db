"""Domain types and information-measure evaluation.

Beliefs are plain 1-d numpy arrays over states; the heavier objects
(decision problems, distributions over posteriors, information measures)
are frozen dataclasses validated on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import entr, rel_entr

from .errors import ProblemError

# tolerance ladder: arithmetic, feasibility, solver optimality
ARITH_TOL = 1e-12
FEAS_TOL = 1e-9
OPT_TOL = 1e-6

DIVERGENCES = ("quadratic", "kl", "entropy_reduction")
PHIS = ("identity", "power")


def check_belief(x, *, strict: bool = False, name: str = "belief", tol: float = ARITH_TOL) -> np.ndarray:
    """Return ``x`` as a float array after checking it lies on the simplex.

    With ``strict`` every coordinate must be positive (full support).
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ProblemError(f"{name} must be a 1-d probability vector")
    if not np.all(np.isfinite(arr)):
        raise ProblemError(f"{name} has non-finite entries")
    if np.any(arr < 0):
        raise ProblemError(f"{name} has negative entries")
    if abs(arr.sum() - 1.0) > tol:
        raise ProblemError(f"{name} sums to {arr.sum():.15g}, not 1")
    if strict and np.any(arr <= 0):
        raise ProblemError(f"{name} must be strictly positive in every state")
    return arr


def entropy(x) -> np.ndarray:
    """Shannon entropy (nats) along the last axis, with 0 ln 0 = 0."""
    return entr(np.asarray(x, dtype=float)).sum(axis=-1)


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DecisionProblem:
    """Finite decision problem: ``utility[a, s]`` is the payoff of action a in state s."""

    utility: np.ndarray
    prior: np.ndarray
    state_labels: tuple = ()
    action_labels: tuple = ()

    def __post_init__(self):
        u = np.asarray(self.utility, dtype=float)
        if u.ndim != 2:
            raise ProblemError("utility must be a matrix with one row per action")
        n_actions, n_states = u.shape
        if n_states < 2:
            raise ProblemError("a decision problem needs at least 2 states")
        if n_actions < 2:
            raise ProblemError("a decision problem needs at least 2 actions")
        if not np.all(np.isfinite(u)):
            raise ProblemError("utility has non-finite entries")
        prior = check_belief(self.prior, strict=True, name="prior")
        if prior.size != n_states:
            raise ProblemError(f"prior has {prior.size} entries but utility has {n_states} states")
        states = tuple(self.state_labels) or tuple(f"s{i + 1}" for i in range(n_states))
        actions = tuple(self.action_labels) or tuple(f"a{i + 1}" for i in range(n_actions))
        if len(states) != n_states:
            raise ProblemError("state label count does not match utility columns")
        if len(actions) != n_actions:
            raise ProblemError("action label count does not match utility rows")
        object.__setattr__(self, "utility", _frozen_array(u))
        object.__setattr__(self, "prior", _frozen_array(prior))
        object.__setattr__(self, "state_labels", states)
        object.__setattr__(self, "action_labels", actions)

    @property
    def n_states(self) -> int:
        return self.utility.shape[1]

    @property
    def n_actions(self) -> int:
        return self.utility.shape[0]

    def expected_payoffs(self, x) -> np.ndarray:
        """E_x u(a, .) for every action; ``x`` may be a stack of beliefs."""
        return np.asarray(x, dtype=float) @ self.utility.T

    def full_info_value(self) -> float:
        return float(self.prior @ self.utility.max(axis=0))

    def with_prior(self, prior) -> "DecisionProblem":
        return DecisionProblem(self.utility, prior, self.state_labels, self.action_labels)


@dataclass(frozen=True, eq=False)
class PosteriorDistribution:
    """Finite-support distribution over posteriors (rows of ``support``)."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = np.atleast_2d(np.asarray(self.support, dtype=float))
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if support.shape[0] != probs.size:
            raise ProblemError("support and probs have different lengths")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
            raise ProblemError("probs must be nonnegative and sum to 1")
        if np.any(support < -ARITH_TOL) or np.any(np.abs(support.sum(axis=1) - 1.0) > 1e-10):
            raise ProblemError("every support point must be a belief")
        object.__setattr__(self, "support", _frozen_array(support))
        object.__setattr__(self, "probs", _frozen_array(probs))

    @classmethod
    def point_mass(cls, x) -> "PosteriorDistribution":
        return cls(np.asarray(x, dtype=float)[None, :], [1.0])

    def __len__(self) -> int:
        return self.probs.size

    def mean(self) -> np.ndarray:
        return self.probs @ self.support

    def is_bayes_plausible(self, mu, tol: float = FEAS_TOL) -> bool:
        return bool(np.max(np.abs(self.mean() - np.asarray(mu, dtype=float))) <= tol)

    def expect(self, values) -> float:
        """Expectation of per-support-point ``values``."""
        return float(self.probs @ np.asarray(values, dtype=float))


@dataclass(frozen=True, eq=False)
class InformationMeasure:
    """Divergence ``c(., reference)`` composed with an outer transform phi.

    ``phi`` is ``"identity"`` or ``"power"`` (t ** p with p >= 1).
    """

    divergence: str
    reference: np.ndarray
    phi: str = "identity"
    p: float = 1.0
    _ref_entropy: float = field(default=0.0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.divergence not in DIVERGENCES:
            raise ProblemError(f"unknown divergence {self.divergence!r}; expected one of {DIVERGENCES}")
        if self.phi not in PHIS:
            raise ProblemError(f"unknown phi {self.phi!r}; expected one of {PHIS}")
        p = float(self.p) if self.phi == "power" else 1.0
        if not np.isfinite(p) or p < 1.0:
            raise ProblemError("power phi needs a finite exponent p >= 1")
        ref = check_belief(self.reference, name="reference")
        if self.divergence == "kl" and np.any(ref <= 0):
            raise ProblemError("kl divergence needs a strictly positive reference")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "reference", _frozen_array(ref))
        object.__setattr__(self, "_ref_entropy", float(entropy(ref)))

    def with_reference(self, reference) -> "InformationMeasure":
        return InformationMeasure(self.divergence, reference, self.phi, self.p)

    def cost(self, x) -> np.ndarray | float:
        """Pointwise divergence c(x, reference); vectorised over leading axes."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.reference.size:
            raise ProblemError(
                f"belief has {x.shape[-1]} states but the reference has {self.reference.size}"
            )
        if self.divergence == "quadratic":
            out = np.square(x - self.reference).sum(axis=-1)
        elif self.divergence == "kl":
            out = rel_entr(x, self.reference).sum(axis=-1)
        else:
            out = self._ref_entropy - entropy(x)
        return float(out) if np.ndim(out) == 0 else out

    def phi_of(self, t):
        t = np.asarray(t, dtype=float)
        if self.phi == "identity":
            out = t
        else:
            out = np.sign(t) * np.abs(t) ** self.p
        return float(out) if out.ndim == 0 else out

    def phi_inverse(self, eta: float) -> float:
        if eta < 0:
            raise ValueError(f"information amount must be nonnegative, got {eta}")
        if self.phi == "identity":
            return float(eta)
        return float(eta) ** (1.0 / self.p)

    def inner(self, F: PosteriorDistribution) -> float:
        """Expected divergence under F, before phi."""
        return F.expect(self.cost(F.support))

    def amount(self, F: PosteriorDistribution) -> float:
        if not F.is_bayes_plausible(self.reference):
            raise ProblemError("distribution over posteriors is not Bayes-plausible for the reference")
        # Jensen: the exact inner expectation is >= 0; clip rounding noise
        return self.phi_of(max(self.inner(F), 0.0))


def eval_divergence(measure: InformationMeasure, x) -> float:
    return measure.cost(np.asarray(x, dtype=float))


def eval_amount(measure: InformationMeasure, F: PosteriorDistribution) -> float:
    return measure.amount(F)


def eval_phi_inverse(measure: InformationMeasure, eta: float) -> float:
    return measure.phi_inverse(eta)


@dataclass(frozen=True, eq=False)
class EtaBudget:
    eta: float
    eta_bar: float

    def __post_init__(self):
        if not (0.0 <= self.eta <= self.eta_bar):
            raise ValueError(f"need 0 <= eta <= eta_bar, got eta={self.eta}, eta_bar={self.eta_bar}")


def make_problem(utility: Sequence[Sequence[float]], prior: Sequence[float], **labels) -> DecisionProblem:
    return DecisionProblem(np.asarray(utility, dtype=float), np.asarray(prior, dtype=float), **labels)
