"""Angle optimizers for the variational driver.

Both routines maximize a black-box objective over angle vectors and
return the best-seen point plus the trace of every evaluation at an
iterate. The objective may be stochastic (noisy trajectories); neither
optimizer assumes repeatable evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtr

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AdamSettings:
    learning_rate: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    fd_step: float = 1e-3


@dataclass(frozen=True)
class BayesSettings:
    init_samples: int = 10
    acquisition: str = "expected_improvement"
    kernel_lengthscale: float = 0.35
    n_candidates: int = 192
    n_starts: int = 3

    def __post_init__(self):
        if self.acquisition != "expected_improvement":
            raise ValueError(f"unsupported acquisition: {self.acquisition!r}")


def central_difference_gradient(f, x: np.ndarray, step: float) -> np.ndarray:
    """Central finite-difference gradient estimate of f at x."""
    grad = np.empty_like(x)
    for i in range(x.size):
        forward = x.copy()
        backward = x.copy()
        forward[i] += step
        backward[i] -= step
        grad[i] = (f(forward) - f(backward)) / (2.0 * step)
    return grad


def adam_maximize(
    f,
    dim: int,
    n_iters: int,
    settings: AdamSettings,
    rng: np.random.Generator,
    init: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Gradient-ascent Adam with central-difference gradients.

    Starts from ``init`` or uniform-random angles in [0, pi). Returns the
    best iterate seen and the objective trace, one entry per iteration.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    x = np.array(init, dtype=float) if init is not None else rng.uniform(0, np.pi, dim)
    s = settings
    m = np.zeros(dim)
    v = np.zeros(dim)
    trace = np.empty(n_iters)
    best_x = x.copy()
    best_f = -np.inf
    for t in range(1, n_iters + 1):
        fx = f(x)
        trace[t - 1] = fx
        if fx > best_f:
            best_f = fx
            best_x = x.copy()
        g = central_difference_gradient(f, x, s.fd_step)
        m = s.beta1 * m + (1.0 - s.beta1) * g
        v = s.beta2 * v + (1.0 - s.beta2) * g * g
        m_hat = m / (1.0 - s.beta1**t)
        v_hat = v / (1.0 - s.beta2**t)
        x = x + s.learning_rate * m_hat / (np.sqrt(v_hat) + s.epsilon)
    return best_x, trace


class _TorusGP:
    """Gaussian-process surrogate with a squared-exponential kernel on the
    2-pi torus (per-dimension chordal distance 2*sin(delta/2)).
    """

    def __init__(self, lengthscale: float):
        self.lengthscale = lengthscale
        self.x_train = None
        self._alpha = None
        self._chol = None
        self._y_mean = 0.0
        self._y_scale = 1.0

    def _cross(self, xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
        delta = xa[:, None, :] - xb[None, :, :]
        d2 = np.sum((2.0 * np.sin(delta / 2.0)) ** 2, axis=-1)
        return np.exp(-0.5 * d2 / self.lengthscale**2)

    def fit(self, x: np.ndarray, y: np.ndarray) -> "_TorusGP":
        self.x_train = x
        self._y_mean = float(y.mean())
        self._y_scale = float(y.std()) or 1.0
        y_std = (y - self._y_mean) / self._y_scale
        k = self._cross(x, x)
        jitter = 1e-10
        for _ in range(8):
            try:
                self._chol = np.linalg.cholesky(k + jitter * np.eye(len(x)))
                break
            except np.linalg.LinAlgError:
                jitter *= 100.0
        else:
            raise np.linalg.LinAlgError("kernel matrix not positive definite")
        self._alpha = np.linalg.solve(
            self._chol.T, np.linalg.solve(self._chol, y_std)
        )
        return self

    def posterior(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        k_star = self._cross(x, self.x_train)
        mu = k_star @ self._alpha * self._y_scale + self._y_mean
        w = np.linalg.solve(self._chol, k_star.T)
        var = np.clip(1.0 - np.sum(w * w, axis=0), 0.0, None)
        return mu, np.sqrt(var) * self._y_scale

    def neg_ei_with_grad(self, x: np.ndarray, best: float) -> tuple[float, np.ndarray]:
        """Negative expected improvement and its gradient at one point
        (standardized-y units), for gradient-based acquisition polishing.
        """
        delta = x[None, :] - self.x_train
        k = np.exp(
            -2.0 * np.sum(np.sin(delta / 2.0) ** 2, axis=-1) / self.lengthscale**2
        )
        dk = k[:, None] * (-np.sin(delta) / self.lengthscale**2)
        mu = float(k @ self._alpha)
        dmu = dk.T @ self._alpha
        w = np.linalg.solve(self._chol, k)
        var = max(1.0 - float(w @ w), 0.0)
        sd = np.sqrt(var)
        v = np.linalg.solve(self._chol.T, w)
        dsd = (-(v @ dk) / sd) if sd > 1e-12 else np.zeros_like(x)

        best_std = (best - self._y_mean) / self._y_scale
        gain = mu - best_std
        if sd <= 1e-12:
            return -max(gain, 0.0), -(dmu if gain > 0 else np.zeros_like(x))
        u = gain / sd
        pdf = np.exp(-0.5 * u * u) / np.sqrt(TWO_PI)
        cdf = float(ndtr(u))
        ei = gain * cdf + sd * pdf
        grad = cdf * dmu + pdf * dsd
        return -ei, -grad


def expected_improvement(mu: np.ndarray, sd: np.ndarray, best: float) -> np.ndarray:
    """Expected improvement over ``best`` for a maximization problem."""
    gain = mu - best
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(sd > 0, gain / np.where(sd > 0, sd, 1.0), 0.0)
    pdf = np.exp(-0.5 * u * u) / np.sqrt(TWO_PI)
    ei = gain * ndtr(u) + sd * pdf
    return np.where(sd > 0, ei, np.maximum(gain, 0.0))


def bayes_maximize(
    f,
    dim: int,
    n_evals: int,
    settings: BayesSettings,
    rng: np.random.Generator,
    init: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian-process global search with expected improvement.

    Spends ``init_samples`` evaluations on uniform-random points in
    [0, 2pi)^dim (after an optional caller-supplied first point), then
    maximizes EI by random multistart for the remaining budget. Returns
    the best-seen point and the full evaluation trace.
    """
    if n_evals < 1:
        raise ValueError("n_evals must be >= 1")
    xs: list[np.ndarray] = []
    ys: list[float] = []

    def evaluate(x: np.ndarray):
        xs.append(x)
        ys.append(float(f(x)))

    if init is not None and len(xs) < n_evals:
        evaluate(np.asarray(init, dtype=float) % TWO_PI)
    while len(xs) < min(settings.init_samples + (init is not None), n_evals):
        evaluate(rng.uniform(0.0, TWO_PI, dim))

    gp = _TorusGP(settings.kernel_lengthscale)
    while len(xs) < n_evals:
        x_arr = np.asarray(xs)
        y_arr = np.asarray(ys)
        best = float(y_arr.max())
        try:
            gp.fit(x_arr, y_arr)
        except np.linalg.LinAlgError:
            evaluate(rng.uniform(0.0, TWO_PI, dim))
            continue

        cands = rng.uniform(0.0, TWO_PI, size=(settings.n_candidates, dim))
        mu, sd = gp.posterior(cands)
        ei = expected_improvement(mu, sd, best)
        order = np.argsort(ei)[::-1]

        best_x = cands[order[0]]
        best_ei = ei[order[0]] / gp._y_scale
        for idx in order[: settings.n_starts]:
            res = minimize(
                gp.neg_ei_with_grad,
                cands[idx],
                args=(best,),
                jac=True,
                method="L-BFGS-B",
                bounds=[(0.0, TWO_PI)] * dim,
                options={"maxiter": 30},
            )
            if -res.fun > best_ei:
                best_ei = -res.fun
                best_x = res.x % TWO_PI
        if best_ei <= 1e-14:
            best_x = rng.uniform(0.0, TWO_PI, dim)
        evaluate(best_x)

    best_idx = int(np.argmax(ys))
    return xs[best_idx], np.asarray(ys)
