"""Analytic reference models: scale ("scedasis") and mixture-probability
function families, tail copulas of known families, window-integrated
quasi-tail copulas by quadrature, and closed-form asymptotic covariances.

These provide the ground truth the simulator targets and the oracles the
test-suite checks estimators against.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy import stats as sps

from .exceptions import ConfigurationError, DomainError, NumericalError

QUAD_ABS_TOL = 1e-8


# ---------------------------------------------------------------------------
# scale and mixture-probability families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScedasisFunction:
    """Positive scale density on [0, 1] integrating to one."""

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(t), dtype=float)
        return float(out) if out.ndim == 0 else out

    def validate(self, grid_size: int = 10_000) -> None:
        total = _quad(self.evaluator, 0.0, 1.0, self.breakpoints)
        if abs(total - 1.0) > 1e-6:
            raise ConfigurationError(f"scedasis integral is {total!r}, expected 1")
        grid = np.union1d(np.linspace(0.0, 1.0, grid_size), self.breakpoints)
        vals = self(grid)
        if not (np.isfinite(vals).all() and (vals > 0).all()):
            raise ConfigurationError("scedasis must be positive and finite on [0, 1]")


@dataclass(frozen=True)
class MixtureProbabilityFunction:
    """Weight on the tail-dependent copula component, in [0, 1] with max 1."""

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(t), dtype=float)
        return float(out) if out.ndim == 0 else out

    def validate(self, grid_size: int = 10_000) -> None:
        grid = np.union1d(np.linspace(0.0, 1.0, grid_size), self.breakpoints)
        vals = self(grid)
        if (vals < -1e-12).any() or (vals > 1 + 1e-12).any():
            raise ConfigurationError("mixture probability must stay in [0, 1]")
        if abs(vals.max() - 1.0) > 1e-6:
            raise ConfigurationError("mixture probability must attain 1")


def _const_one(x):
    return np.ones_like(np.asarray(x, dtype=float))


def _c2_tent(x):
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.5, 2.0 * x + 0.5, 2.5 - 2.0 * x)


def _c3_spike(x):
    x = np.asarray(x, dtype=float)
    up = 20.0 * x - 7.2
    down = 12.8 - 20.0 * x
    return np.where(
        x <= 0.4, 0.8, np.where(x <= 0.5, up, np.where(x < 0.6, down, 0.8))
    )


def _h2_tent(x):
    x = np.asarray(x, dtype=float)
    return np.where(x < 0.5, 2.0 * x, 2.0 - 2.0 * x)


C1_CONST = ScedasisFunction("C1_CONST", _const_one)
C2_TENT = ScedasisFunction("C2_TENT", _c2_tent, breakpoints=(0.5,))
C3_SPIKE = ScedasisFunction("C3_SPIKE", _c3_spike, breakpoints=(0.4, 0.5, 0.6))

H1_CONST = MixtureProbabilityFunction("H1_CONST", _const_one)
H2_TENT = MixtureProbabilityFunction("H2_TENT", _h2_tent, breakpoints=(0.5,))


def custom_scedasis(evaluator, breakpoints=()) -> ScedasisFunction:
    fn = ScedasisFunction("CUSTOM", evaluator, tuple(breakpoints))
    fn.validate()
    return fn


def custom_mixture_probability(evaluator, breakpoints=()) -> MixtureProbabilityFunction:
    fn = MixtureProbabilityFunction("CUSTOM", evaluator, tuple(breakpoints))
    fn.validate()
    return fn


# ---------------------------------------------------------------------------
# tail copula models
# ---------------------------------------------------------------------------

_FD_STEP = 1e-5


@dataclass(frozen=True)
class TailCopulaModel:
    """Tail copula R(x, y) with partial derivatives.

    R is homogeneous of degree 1, 2-nondecreasing and bounded by min(x, y);
    the built-in families satisfy this by construction and the property
    suite re-checks it on grids.
    """

    kind: str
    evaluator: Callable
    partial1: Callable
    partial2: Callable
    params: dict = field(default_factory=dict)

    def __call__(self, x, y):
        out = np.asarray(self.evaluator(np.asarray(x, float), np.asarray(y, float)))
        return float(out) if out.ndim == 0 else out


def _fd_partial(fn, arg_index):
    def partial(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if arg_index == 0:
            h = _FD_STEP * np.maximum(1.0, np.abs(x))
            return (fn(x + h, y) - fn(x - h, y)) / (2.0 * h)
        h = _FD_STEP * np.maximum(1.0, np.abs(y))
        return (fn(x, y + h) - fn(x, y - h)) / (2.0 * h)

    return partial


def t_copula_tail_dependence(df: float, rho: float) -> float:
    """Tail dependence coefficient R(1,1) of the t copula:

        lambda = 2 * T_{df+1}( -sqrt((df+1)(1-rho)/(1+rho)) )

    with T_nu the univariate Student-t distribution function.
    """
    if df <= 0:
        raise DomainError(f"df must be positive, got {df}")
    if not -1.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    arg = -np.sqrt((df + 1.0) * (1.0 - rho) / (1.0 + rho))
    return float(2.0 * sps.t.cdf(arg, df + 1.0))


def t_copula_model(df: float = 1.0, rho: float = 0.0) -> TailCopulaModel:
    """Tail copula of the bivariate t copula,

        R(x, y) = x * S_{df+1}(c [(x/y)^{1/df} - rho])
                + y * S_{df+1}(c [(y/x)^{1/df} - rho]),

    where S_nu is the Student-t survival function and
    c = sqrt((df+1)/(1-rho^2)). Partials are central finite differences.
    """
    if df <= 0 or not -1.0 < rho < 1.0:
        raise DomainError(f"invalid t copula parameters df={df}, rho={rho}")
    c = np.sqrt((df + 1.0) / (1.0 - rho * rho))
    nu = df + 1.0

    def evaluator(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(y > 0, x / np.where(y > 0, y, 1.0), np.inf)
            t1 = x * sps.t.sf(c * (ratio ** (1.0 / df) - rho), nu)
            ratio2 = np.where(x > 0, y / np.where(x > 0, x, 1.0), np.inf)
            t2 = y * sps.t.sf(c * (ratio2 ** (1.0 / df) - rho), nu)
        out = t1 + t2
        return np.where((x <= 0) | (y <= 0), 0.0, out)

    return TailCopulaModel(
        kind="T_COPULA",
        evaluator=evaluator,
        partial1=_fd_partial(evaluator, 0),
        partial2=_fd_partial(evaluator, 1),
        params={"df": float(df), "rho": float(rho)},
    )


def clayton_model() -> TailCopulaModel:
    """Clayton tail copula R(x, y) = (1/x + 1/y)^(-1) with closed-form
    partials y^2/(x+y)^2 and x^2/(x+y)^2."""

    def evaluator(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        s = x + y
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(s > 0, x * y / np.where(s > 0, s, 1.0), 0.0)
        return out

    def p1(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        s = x + y
        return np.where(s > 0, (y / np.where(s > 0, s, 1.0)) ** 2, 0.0)

    def p2(x, y):
        return p1(y, x)

    return TailCopulaModel("CLAYTON", evaluator, p1, p2)


def _zero_copula(x, y):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)


def independence_model() -> TailCopulaModel:
    return TailCopulaModel("INDEPENDENCE", _zero_copula, _zero_copula, _zero_copula)


def custom_tail_copula(evaluator, partial1=None, partial2=None) -> TailCopulaModel:
    return TailCopulaModel(
        "CUSTOM",
        evaluator,
        partial1 if partial1 is not None else _fd_partial(evaluator, 0),
        partial2 if partial2 is not None else _fd_partial(evaluator, 1),
    )


def clayton_amh_mixture(u, v, p: float):
    """Survival-copula mixture p * Clayton + (1-p) * survival-AMH on [0,1]^2.

    The AMH component enters through its survival copula
    u + v - 1 + C_AMH(1-u, 1-v), whose corner vanishes at O(1/t) (the AMH
    upper tail is independent), so the scaled corner t * C(x/t, y/t)
    converges to p times the Clayton tail copula xy/(x+y) at rate O(1/t).
    Plugging the AMH distribution copula in directly would instead
    contribute the full Clayton-type corner xy/(x+y).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    clay = 1.0 / (1.0 / u + 1.0 / v - 1.0)
    uu, vv = 1.0 - u, 1.0 - v
    amh_survival = u + v - 1.0 + uu * vv / (1.0 - u * v)
    return p * clay + (1.0 - p) * amh_survival


# ---------------------------------------------------------------------------
# quadrature of the quasi-tail copula
# ---------------------------------------------------------------------------

def _quad(fn, a: float, b: float, breakpoints=()) -> float:
    pts = sorted(p for p in breakpoints if a < p < b)
    val, err = integrate.quad(
        fn, a, b, points=pts or None, epsabs=QUAD_ABS_TOL * 1e-2, limit=200
    )
    if err > QUAD_ABS_TOL:
        raise NumericalError(
            f"quadrature on [{a}, {b}] reports error {err:.2e} > {QUAD_ABS_TOL:.0e}"
        )
    return float(val)


def eval_quasi_tail_copula(
    R: TailCopulaModel,
    c1: ScedasisFunction,
    c2: ScedasisFunction,
    h: MixtureProbabilityFunction,
    x: float,
    y: float,
    z1: float = 0.0,
    z2: float = 1.0,
) -> float:
    """Window-integrated quasi-tail copula

        integral_{z1}^{z2} h(t) R(c1(t) x, c2(t) y) dt

    by adaptive quadrature split at the kinks of the piecewise-linear
    families (absolute tolerance 1e-8)."""
    if not (x > 0 and y > 0):
        raise DomainError("x and y must be positive")
    if not 0.0 <= z1 < z2 <= 1.0:
        raise DomainError(f"window ({z1}, {z2}] must satisfy 0 <= z1 < z2 <= 1")
    pts = set(c1.breakpoints) | set(c2.breakpoints) | set(h.breakpoints)

    def integrand(t):
        return h(t) * float(R(c1(t) * x, c2(t) * y))

    return _quad(integrand, z1, z2, tuple(pts))


def eval_quasi_tail_copula_partial(
    j: int,
    R: TailCopulaModel,
    c1: ScedasisFunction,
    c2: ScedasisFunction,
    h: MixtureProbabilityFunction,
    x: float,
    y: float,
    z1: float = 0.0,
    z2: float = 1.0,
) -> float:
    """Window-integrated partial derivative:

        integral_{z1}^{z2} h(t) R_j(c1(t) x, c2(t) y) c_j(t) dt
    """
    if j not in (1, 2):
        raise DomainError("j must be 1 or 2")
    if not (x > 0 and y > 0):
        raise DomainError("x and y must be positive")
    if not 0.0 <= z1 < z2 <= 1.0:
        raise DomainError(f"window ({z1}, {z2}] must satisfy 0 <= z1 < z2 <= 1")
    pts = set(c1.breakpoints) | set(c2.breakpoints) | set(h.breakpoints)
    partial = R.partial1 if j == 1 else R.partial2
    cj = c1 if j == 1 else c2

    def integrand(t):
        return h(t) * float(partial(c1(t) * x, c2(t) * y)) * cj(t)

    return _quad(integrand, z1, z2, tuple(pts))


# ---------------------------------------------------------------------------
# closed-form asymptotic covariances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticCovariance:
    """Joint limit covariance blocks under equal scale functions and a
    constant mixture probability: a 2x2 block for the rescaled Hill pair and
    a 3x3 block (times scale) for the scedasis/dependence curves."""

    gamma_matrix: np.ndarray
    b_matrix: Optional[np.ndarray]
    scale: float


def asymptotic_covariance_blocks(
    s1: float,
    s2: float,
    gamma1: float,
    gamma2: float,
    R: TailCopulaModel,
    z: float,
    C1z: float,
) -> AsymptoticCovariance:
    """Populate the closed-form covariance blocks

        Gamma = [[s1 g1^2, r g1 g2], [r g1 g2, s2 g2^2]],
        B     = [[s1, r, s1], [r, s2, s2], [s1, s2, s1 s2 / r]],

    with r = R(s2, s1), scaled by C1(z)(1 - C1(z)) for the curve block.
    r = 0 leaves B unavailable."""
    if not 0.0 < z < 1.0:
        raise DomainError(f"z must lie in (0, 1), got {z}")
    r = float(R(s2, s1))
    gamma_matrix = np.array(
        [
            [s1 * gamma1**2, r * gamma1 * gamma2],
            [r * gamma1 * gamma2, s2 * gamma2**2],
        ]
    )
    b_matrix = None
    if r > 0:
        b_matrix = np.array(
            [
                [s1, r, s1],
                [r, s2, s2],
                [s1, s2, s1 * s2 / r],
            ]
        )
    return AsymptoticCovariance(
        gamma_matrix=gamma_matrix, b_matrix=b_matrix, scale=C1z * (1.0 - C1z)
    )
