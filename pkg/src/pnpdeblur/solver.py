"""ADMM iteration engines with an adaptive penalty parameter.

The restoration problem is split over three blocks: the blurred-data block
(KL fidelity prox, closed form), the regularization block (any denoiser),
and the nonnegativity block (orthant projection). The x-update solves the
spectral system from :mod:`.linops`, so no inner iterative solver appears
anywhere. Multipliers are kept in scaled form (lambda absorbs gamma); with a
background b > 0 the first constraint block reads H x = w1 - b and the shift
is carried consistently through the x-update right-hand side, the multiplier
update, and the primal residual.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import DivergenceError, ParameterError
from .grid import ImageGrid, Problem
from .linops import SpectralSolver, convolve, convolve_adjoint, solve_deblur_system
from .proximal import Denoiser, project_nonneg, prox_kl

__all__ = [
    "SplitState",
    "GammaSchedule",
    "StrengthPolicy",
    "RunConfig",
    "TracePoint",
    "Residuals",
    "RunReport",
    "init_state",
    "pnp_step",
    "prox_split_step",
    "compute_residuals",
    "update_gamma",
    "run",
]


@dataclass(frozen=True)
class SplitState:
    """Full iteration state: primal iterate, three splits, three multipliers."""

    x: ImageGrid
    w1: ImageGrid
    w2: ImageGrid
    w3: ImageGrid
    l1: ImageGrid
    l2: ImageGrid
    l3: ImageGrid
    gamma: float
    k: int

    def __post_init__(self):
        shape = self.x.shape
        for name in ("w1", "w2", "w3", "l1", "l2", "l3"):
            if getattr(self, name).shape != shape:
                raise ParameterError(f"state grid {name} shape mismatch")
        if not self.gamma > 0.0:
            raise ParameterError(f"gamma must be > 0, got {self.gamma}")

    def grids(self):
        return (self.x, self.w1, self.w2, self.w3, self.l1, self.l2, self.l3)


@dataclass(frozen=True)
class GammaSchedule:
    """Residual-balancing update of the penalty parameter.

    While ``k <= k_max``: a dominant primal residual divides gamma by alpha
    (tightening the coupling term), a dominant dual residual multiplies it.
    ``literal=True`` switches the first branch to the reciprocal form
    ``alpha / gamma`` for reproduction experiments.
    """

    alpha: float = 1.001
    mu: float = 1.001
    k_max: int = 1250
    mode: str = "adaptive"
    literal: bool = False

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise ParameterError(f"alpha must be > 1, got {self.alpha}")
        if not self.mu > 1.0:
            raise ParameterError(f"mu must be > 1, got {self.mu}")
        if self.k_max < 0:
            raise ParameterError(f"k_max must be >= 0, got {self.k_max}")
        if self.mode not in ("adaptive", "fixed"):
            raise ParameterError(f"unknown schedule mode {self.mode!r}")


@dataclass(frozen=True)
class StrengthPolicy:
    """Denoiser strength per iteration.

    ``fixed_product`` keeps the strength at ``value`` regardless of gamma
    (the regularization weight is implicitly rescaled every iteration);
    ``fixed_beta`` fixes the weight at ``value / gamma0`` instead, so the
    strength tracks the current gamma.
    """

    mode: str = "fixed_product"
    value: float = 0.1

    def __post_init__(self):
        if self.mode not in ("fixed_product", "fixed_beta"):
            raise ParameterError(f"unknown strength mode {self.mode!r}")
        if self.value < 0.0:
            raise ParameterError(f"strength value must be >= 0, got {self.value}")

    def strength_at(self, gamma: float, gamma0: float) -> float:
        if self.mode == "fixed_product":
            return self.value
        return self.value * (gamma / gamma0)


@dataclass(frozen=True)
class RunConfig:
    max_iter: int
    gamma0: float
    denoiser: Denoiser
    schedule: GammaSchedule = GammaSchedule()
    strength_policy: StrengthPolicy = StrengthPolicy()
    residual_tol: float = 0.0  # 0 disables the residual stop
    trace_every: int = 1

    def validate(self) -> None:
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.gamma0 > 0.0:
            raise ParameterError(f"gamma0 must be > 0, got {self.gamma0}")
        if self.residual_tol < 0.0:
            raise ParameterError(f"residual_tol must be >= 0, got {self.residual_tol}")
        if self.trace_every < 1:
            raise ParameterError(f"trace_every must be >= 1, got {self.trace_every}")


@dataclass(frozen=True)
class TracePoint:
    k: int
    gamma: float
    primal: float
    dual: float
    kl: float
    change_norm: float


@dataclass(frozen=True)
class Residuals:
    primal: float
    dual: float


@dataclass(frozen=True)
class RunReport:
    final_state: SplitState
    trace: list[TracePoint] = field(repr=False)
    iterations_run: int = 0
    stop_reason: str = "max_iter"

    @property
    def restored(self) -> ImageGrid:
        """The restored image: the nonnegativity-block iterate w3."""
        return self.final_state.w3


def init_state(problem: Problem, gamma0: float) -> SplitState:
    """Start from the observed data: x = g and the splits made consistent.

    w1 = H x + b, w2 = w3 = x, all multipliers zero, so every constraint
    holds exactly at iteration 0.
    """
    if not gamma0 > 0.0:
        raise ParameterError(f"gamma0 must be > 0, got {gamma0}")
    x0 = problem.g.copy()
    return SplitState(
        x=x0,
        w1=convolve(problem.otf, x0) + problem.b,
        w2=x0.copy(),
        w3=x0.copy(),
        l1=np.zeros_like(x0),
        l2=np.zeros_like(x0),
        l3=np.zeros_like(x0),
        gamma=float(gamma0),
        k=0,
    )


def pnp_step(
    state: SplitState,
    problem: Problem,
    denoiser: Denoiser,
    strength: float,
    solver: Optional[SpectralSolver] = None,
) -> SplitState:
    """One plug-and-play ADMM iteration.

    In order: spectral x-update, KL prox on the data block, denoiser on the
    regularization block, orthant projection, multiplier ascent. Gamma and
    strength are inputs here; scheduling them is the driver's job.
    """
    if solver is None:
        solver = SpectralSolver.for_otf(problem.otf)
    g, b, gamma = problem.g, problem.b, state.gamma

    rhs = (
        convolve_adjoint(problem.otf, state.w1 - b - state.l1)
        + (state.w2 - state.l2)
        + (state.w3 - state.l3)
    )
    x = solve_deblur_system(solver, rhs)
    hx = convolve(problem.otf, x)

    w1 = prox_kl(hx + state.l1, g, b, gamma)
    w2 = denoiser.apply(x + state.l2, strength)
    w3 = project_nonneg(x + state.l3)

    l1 = state.l1 + (hx - w1 + b)
    l2 = state.l2 + (x - w2)
    l3 = state.l3 + (x - w3)

    return SplitState(
        x=x, w1=w1, w2=w2, w3=w3, l1=l1, l2=l2, l3=l3, gamma=gamma, k=state.k + 1
    )


def prox_split_step(
    state: SplitState,
    problem: Problem,
    prox_regularizer: Callable[[ImageGrid, float], ImageGrid],
    beta: float,
    solver: Optional[SpectralSolver] = None,
) -> SplitState:
    """One explicit-regularizer iteration: the denoiser slot runs
    ``prox_regularizer(., beta * gamma)``.

    Delegates to :func:`pnp_step`, so with the shipped transform-domain
    soft-threshold prox the two paths are identical computation for
    computation.
    """
    if beta < 0.0:
        raise ParameterError(f"beta must be >= 0, got {beta}")
    d = Denoiser(name="prox_regularizer", claims_firmly_nonexpansive=True, fn=prox_regularizer)
    return pnp_step(state, problem, d, beta * state.gamma, solver=solver)


def compute_residuals(
    prev_w: tuple[ImageGrid, ImageGrid, ImageGrid],
    state: SplitState,
    problem: Problem,
) -> Residuals:
    """Primal and dual residual norms of the three-block constraint system.

    primal = || (H x - w1 + b, x - w2, x - w3) ||_2
    dual   = (1 / gamma) * || H^T (w1 - w1_prev) + (w2 - w2_prev) + (w3 - w3_prev) ||_2
    """
    w1p, w2p, w3p = prev_w
    hx = convolve(problem.otf, state.x)
    p1 = hx - state.w1 + problem.b
    p2 = state.x - state.w2
    p3 = state.x - state.w3
    primal = float(np.sqrt(np.sum(p1 * p1) + np.sum(p2 * p2) + np.sum(p3 * p3)))
    d = (
        convolve_adjoint(problem.otf, state.w1 - w1p)
        + (state.w2 - w2p)
        + (state.w3 - w3p)
    )
    dual = float(np.linalg.norm(d.ravel()) / state.gamma)
    return Residuals(primal=primal, dual=dual)


def update_gamma(
    gamma: float, primal: float, dual: float, sched: GammaSchedule, k: int
) -> float:
    """Residual-balancing gamma update; inert when fixed or past k_max.

    Ties (primal == mu * dual exactly) change nothing: the branches use
    strict inequalities, so exactly one of the three outcomes fires.
    """
    if sched.mode == "fixed" or k > sched.k_max:
        return gamma
    if primal > sched.mu * dual:
        return sched.alpha / gamma if sched.literal else gamma / sched.alpha
    if dual > sched.mu * primal:
        return gamma * sched.alpha
    return gamma


def _w_change_norm(
    prev_w: tuple[ImageGrid, ImageGrid, ImageGrid], state: SplitState
) -> float:
    acc = 0.0
    for prev, cur in zip(prev_w, (state.w1, state.w2, state.w3)):
        diff = cur - prev
        acc += float(np.sum(diff * diff))
    return float(np.sqrt(acc))


def _check_finite(state: SplitState) -> None:
    for grid in state.grids():
        if not np.isfinite(grid).all():
            raise DivergenceError(state.k)


def run(problem: Problem, config: RunConfig) -> RunReport:
    """Iterate to convergence or the iteration cap, recording a scalar trace.

    The trace keeps k = 0, every ``trace_every``-th iteration, and the final
    one; only scalars are retained. With ``residual_tol > 0`` the loop stops
    early once max(primal, dual) falls under it. The gamma stored at trace
    entry k is the one that produced iterate k; the scheduler decides the
    next gamma afterwards, so an adaptive gamma is frozen for all k > k_max.
    """
    config.validate()
    solver = SpectralSolver.for_otf(problem.otf)
    state = init_state(problem, config.gamma0)

    res0 = compute_residuals((state.w1, state.w2, state.w3), state, problem)
    trace = [
        TracePoint(
            k=0,
            gamma=state.gamma,
            primal=res0.primal,
            dual=res0.dual,
            kl=float(kernels.kl_value(state.w1, problem.g)),
            change_norm=0.0,
        )
    ]

    iterations_run = 0
    stop_reason = "max_iter"
    for _ in range(config.max_iter):
        prev_w = (state.w1, state.w2, state.w3)
        strength = config.strength_policy.strength_at(state.gamma, config.gamma0)
        state = pnp_step(state, problem, config.denoiser, strength, solver=solver)
        _check_finite(state)
        iterations_run = state.k

        res = compute_residuals(prev_w, state, problem)
        hit_tol = config.residual_tol > 0.0 and (
            max(res.primal, res.dual) <= config.residual_tol
        )
        is_last = hit_tol or state.k == config.max_iter
        if state.k % config.trace_every == 0 or is_last:
            trace.append(
                TracePoint(
                    k=state.k,
                    gamma=state.gamma,
                    primal=res.primal,
                    dual=res.dual,
                    kl=float(kernels.kl_value(state.w1, problem.g)),
                    change_norm=_w_change_norm(prev_w, state),
                )
            )
        if hit_tol:
            stop_reason = "residual_tol"
            break

        new_gamma = update_gamma(state.gamma, res.primal, res.dual, config.schedule, state.k)
        if new_gamma != state.gamma:
            state = replace(state, gamma=new_gamma)

    return RunReport(
        final_state=state,
        trace=trace,
        iterations_run=iterations_run,
        stop_reason=stop_reason,
    )
