"""The classical optimizer suite behind a single minimization contract.

Ten methods: GD, ADAM, CG, LBFGS, NELDER_MEAD (smooth family), SPSA,
POWELL, COBYLA (gradient-free), AQGD, NFT (circuit-structured). Every run
returns an OptimizerResult with exact evaluation accounting: an
"evaluation" is one cost value obtained from the cost object, whether
through a plain call, a finite-difference probe, or a shift-rule energy.

Iteration semantics: one iteration = one outer update (gradient step, SPSA
step, Powell cycle, NFT sweep, simplex update). Trajectories record the
best-seen value at the end of each iteration, so best_value always equals
the trajectory minimum even when the best point occurred mid-line-search.

Reruns with identical seeds are bit-identical; the only randomness is the
seeded generator handed to SPSA / NFT(random) and whatever the cost itself
draws from its own seeded backend.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...


@dataclass
class OptimizerResult:
    best_params: np.ndarray
    best_value: float
    n_iterations: int
    n_evaluations: int
    trajectory: list[tuple[int, float]]
    eval_counts: list[int] = field(default_factory=list)
    status: str = "ok"
    message: str = ""


class _NanAbort(Exception):
    pass


class TrackedCost:
    """Counting wrapper: evaluation totals, best-seen tracking, NaN abort."""

    def __init__(self, cost):
        self.cost = cost
        self.n_evaluations = 0
        self.best_value = math.inf
        self.best_params: np.ndarray | None = None
        self.eval_values: list[float] = []

    def __call__(self, params, tie_wins: bool = False) -> float:
        value = float(self.cost(np.asarray(params, dtype=float)))
        self.record(value, params, tie_wins)
        return value

    def record(self, value: float, params=None, tie_wins: bool = False) -> None:
        self.n_evaluations += 1
        self.eval_values.append(value)
        if math.isnan(value):
            raise _NanAbort()
        better = value <= self.best_value if tie_wins else value < self.best_value
        if better and params is not None:
            self.best_value = min(value, self.best_value)
            self.best_params = np.array(params, dtype=float)

    def gradient_fn(self, fd_step: float):
        """Analytic gradient when the cost exposes one, else central differences."""
        exposed = getattr(self.cost, "gradient", None)
        if callable(exposed):
            return lambda x: np.asarray(exposed(np.asarray(x, dtype=float)), dtype=float)

        def central(x):
            x = np.asarray(x, dtype=float)
            g = np.zeros_like(x)
            for j in range(x.size):
                step = np.zeros_like(x)
                step[j] = fd_step
                g[j] = (self(x + step) - self(x - step)) / (2.0 * fd_step)
            return g

        return central


class _Run:
    """Per-iteration trajectory bookkeeping shared by every optimizer."""

    def __init__(self, tracked: TrackedCost, x0):
        self.tracked = tracked
        self.x0 = np.asarray(x0, dtype=float)
        if not np.all(np.isfinite(self.x0)):
            raise DomainError("initial point must be finite")
        self.trajectory: list[tuple[int, float]] = []
        self.eval_counts: list[int] = []
        self.n_iterations = 0

    def mark(self, iteration: int) -> None:
        self.n_iterations = iteration
        self.trajectory.append((iteration, self.tracked.best_value))
        self.eval_counts.append(self.tracked.n_evaluations)

    def finish(self, status="ok", message="") -> OptimizerResult:
        best_params = self.tracked.best_params
        if best_params is None:
            best_params = self.x0.copy()
        return OptimizerResult(
            best_params=best_params,
            best_value=self.tracked.best_value,
            n_iterations=self.n_iterations,
            n_evaluations=self.tracked.n_evaluations,
            trajectory=self.trajectory,
            eval_counts=self.eval_counts,
            status=status,
            message=message,
        )


def _guard_nan(run: _Run, body) -> OptimizerResult:
    try:
        return body()
    except _NanAbort:
        return run.finish(status="nan-abort", message="cost returned NaN; best-so-far reported")


# ---------------------------------------------------------------------------
# Smooth family: GD, ADAM, CG, LBFGS, NELDER_MEAD


class SmoothMethod(enum.Enum):
    GD = "gd"
    ADAM = "adam"
    CG = "cg"
    LBFGS = "lbfgs"
    NELDER_MEAD = "nelder-mead"


@dataclass(frozen=True)
class SmoothConfig:
    max_iter: int = 100
    tol: float = 1e-10
    learning_rate: float = 0.1
    memory: int = 10  # LBFGS history
    fd_step: float = 1e-6
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    simplex_step: float | None = None  # Nelder-Mead initial spread (scipy-style when None)


def _strong_wolfe(f, grad_fn, x, fx, gx, direction, c2, max_trials=10):
    """Line search satisfying the strong Wolfe conditions (with zoom)."""
    c1 = 1e-4
    phi0 = fx
    dphi0 = float(gx @ direction)
    if dphi0 >= 0:
        return None  # not a descent direction

    def phi(alpha):
        return f(x + alpha * direction)

    def dphi(alpha):
        g = grad_fn(x + alpha * direction)
        return float(g @ direction), g

    def zoom(lo, hi, phi_lo):
        for _ in range(10):
            mid = 0.5 * (lo + hi)
            phi_mid = phi(mid)
            if phi_mid > phi0 + c1 * mid * dphi0 or phi_mid >= phi_lo:
                hi = mid
            else:
                d_mid, g_mid = dphi(mid)
                if abs(d_mid) <= -c2 * dphi0:
                    return mid, phi_mid, g_mid
                if d_mid * (hi - lo) >= 0:
                    hi = lo
                lo, phi_lo = mid, phi_mid
        phi_lo_final = phi(lo)
        return lo, phi_lo_final, grad_fn(x + lo * direction)

    alpha_prev, phi_prev = 0.0, phi0
    alpha = 1.0
    for trial in range(max_trials):
        phi_a = phi(alpha)
        if phi_a > phi0 + c1 * alpha * dphi0 or (trial > 0 and phi_a >= phi_prev):
            return zoom(alpha_prev, alpha, phi_prev)
        d_a, g_a = dphi(alpha)
        if abs(d_a) <= -c2 * dphi0:
            return alpha, phi_a, g_a
        if d_a >= 0:
            return zoom(alpha, alpha_prev, phi_a)
        alpha_prev, phi_prev = alpha, phi_a
        alpha *= 2.0
    return alpha_prev, phi_prev, grad_fn(x + alpha_prev * direction)


def _minimize_gradient_family(method, tracked, run, x0, config):
    grad_fn = tracked.gradient_fn(config.fd_step)
    x = run.x0.copy()
    f_x = tracked(x)
    run.mark(0)
    n = x.size

    if method is SmoothMethod.GD:
        for k in range(1, config.max_iter + 1):
            x = x - config.learning_rate * grad_fn(x)
            f_new = tracked(x)
            run.mark(k)
            if abs(f_new - f_x) < config.tol:
                f_x = f_new
                break
            f_x = f_new
        return run.finish()

    if method is SmoothMethod.ADAM:
        m = np.zeros(n)
        v = np.zeros(n)
        for k in range(1, config.max_iter + 1):
            g = grad_fn(x)
            m = config.adam_beta1 * m + (1 - config.adam_beta1) * g
            v = config.adam_beta2 * v + (1 - config.adam_beta2) * g * g
            m_hat = m / (1 - config.adam_beta1**k)
            v_hat = v / (1 - config.adam_beta2**k)
            x = x - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_eps)
            f_new = tracked(x)
            run.mark(k)
            if abs(f_new - f_x) < config.tol:
                f_x = f_new
                break
            f_x = f_new
        return run.finish()

    # CG (Polak-Ribiere+ with restart) and LBFGS, both on strong Wolfe searches
    if config.max_iter < 1:
        return run.finish()
    g = grad_fn(x)
    if method is SmoothMethod.CG:
        d = -g
        for k in range(1, config.max_iter + 1):
            ls = _strong_wolfe(tracked, grad_fn, x, f_x, g, d, c2=0.1)
            if ls is None:
                d = -g
                ls = _strong_wolfe(tracked, grad_fn, x, f_x, g, d, c2=0.1)
                if ls is None:
                    run.mark(k)
                    break
            alpha, f_new, g_new = ls
            x = x + alpha * d
            beta = max(0.0, float(g_new @ (g_new - g)) / max(float(g @ g), 1e-300))
            d = -g_new + beta * d
            g = g_new
            run.mark(k)
            if abs(f_new - f_x) < config.tol:
                f_x = f_new
                break
            f_x = f_new
        return run.finish()

    history: list[tuple[np.ndarray, np.ndarray]] = []
    for k in range(1, config.max_iter + 1):
        q = g.copy()
        alphas = []
        for s, y in reversed(history):
            rho = 1.0 / float(y @ s)
            a = rho * float(s @ q)
            alphas.append((a, rho, s, y))
            q = q - a * y
        if history:
            s_last, y_last = history[-1]
            gamma = float(s_last @ y_last) / max(float(y_last @ y_last), 1e-300)
            q = gamma * q
        for a, rho, s, y in reversed(alphas):
            b = rho * float(y @ q)
            q = q + (a - b) * s
        d = -q
        ls = _strong_wolfe(tracked, grad_fn, x, f_x, g, d, c2=0.9)
        if ls is None:
            history.clear()
            d = -g
            ls = _strong_wolfe(tracked, grad_fn, x, f_x, g, d, c2=0.9)
            if ls is None:
                run.mark(k)
                break
        alpha, f_new, g_new = ls
        s = alpha * d
        y = g_new - g
        if float(s @ y) > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            history.append((s, y))
            if len(history) > config.memory:
                history.pop(0)
        x = x + s
        g = g_new
        run.mark(k)
        if abs(f_new - f_x) < config.tol:
            f_x = f_new
            break
        f_x = f_new
    return run.finish()


def _minimize_nelder_mead(tracked, run, config):
    x0 = run.x0
    n = x0.size
    simplex = [x0.copy()]
    for j in range(n):
        vertex = x0.copy()
        if config.simplex_step is not None:
            vertex[j] += config.simplex_step
        else:  # scipy-style initial simplex
            vertex[j] = vertex[j] * 1.05 if vertex[j] != 0.0 else 0.00025
        simplex.append(vertex)
    values = [tracked(v) for v in simplex]
    run.mark(0)
    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    x_tol = max(math.sqrt(config.tol), 1e-8)
    for k in range(1, config.max_iter + 1):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        x_spread = max(
            float(np.abs(v - simplex[0]).max()) for v in simplex[1:]
        )
        if max(values) - min(values) < config.tol and x_spread < x_tol:
            run.mark(k)
            break
        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + alpha * (centroid - simplex[-1])
        f_r = tracked(reflected)
        if values[0] <= f_r < values[-2]:
            simplex[-1], values[-1] = reflected, f_r
        elif f_r < values[0]:
            expanded = centroid + gamma * (reflected - centroid)
            f_e = tracked(expanded)
            if f_e < f_r:
                simplex[-1], values[-1] = expanded, f_e
            else:
                simplex[-1], values[-1] = reflected, f_r
        else:
            contracted = centroid + rho * (simplex[-1] - centroid)
            f_c = tracked(contracted)
            if f_c < values[-1]:
                simplex[-1], values[-1] = contracted, f_c
            else:
                best = simplex[0]
                for i in range(1, n + 1):
                    simplex[i] = best + sigma * (simplex[i] - best)
                    values[i] = tracked(simplex[i])
        run.mark(k)
    return run.finish()


def minimize_smooth(method: SmoothMethod | str, cost, x0,
                    config: SmoothConfig | None = None) -> OptimizerResult:
    """GD follows the plain learning-rate update exactly; ADAM/CG/LBFGS/NM are
    standard textbook formulations. Stops at max_iter or when the
    per-iteration decrease drops below tol (Nelder-Mead: simplex f-spread)."""
    if isinstance(method, str):
        method = SmoothMethod(method)
    config = config or SmoothConfig()
    tracked = TrackedCost(cost)
    run = _Run(tracked, x0)
    if method is SmoothMethod.NELDER_MEAD:
        return _guard_nan(run, lambda: _minimize_nelder_mead(tracked, run, config))
    return _guard_nan(
        run, lambda: _minimize_gradient_family(method, tracked, run, run.x0, config)
    )


# ---------------------------------------------------------------------------
# SPSA


@dataclass(frozen=True)
class SpsaConfig:
    a: float | None = None  # calibrated from the first gradient estimate when None
    c: float = 0.1
    A: float | None = None  # defaults to 0.1 * max_iter
    alpha: float = 0.602
    gamma: float = 0.101
    max_iter: int = 100
    first_step: float = 0.1  # calibration target for |a_0 * g_0|

    def __post_init__(self):
        if self.c <= 0:
            raise DomainError("SPSA perturbation c must be positive")
        if not 0 < self.alpha <= 1:
            raise DomainError("SPSA alpha must lie in (0, 1]")


def minimize_spsa(cost, x0, config: SpsaConfig | None = None,
                  seed: int | None = 0) -> OptimizerResult:
    """Two-sided simultaneous-perturbation descent: exactly two cost
    evaluations per iteration plus one final evaluation."""
    config = config or SpsaConfig()
    tracked = TrackedCost(cost)
    run = _Run(tracked, x0)
    rng = np.random.default_rng(seed)
    big_a = config.A if config.A is not None else 0.1 * config.max_iter
    a_gain = config.a

    def body():
        nonlocal a_gain
        x = run.x0.copy()
        n = x.size
        for k in range(config.max_iter):
            c_k = config.c / (k + 1) ** config.gamma
            delta = rng.integers(0, 2, size=n) * 2.0 - 1.0
            y_plus = tracked(x + c_k * delta)
            y_minus = tracked(x - c_k * delta)
            ghat = (y_plus - y_minus) / (2.0 * c_k) * delta  # 1/delta_i = delta_i
            if a_gain is None:
                norm = float(np.linalg.norm(ghat))
                a_gain = (
                    config.first_step * (big_a + 1.0) ** config.alpha / norm
                    if norm > 0
                    else config.first_step
                )
            a_k = a_gain / (big_a + k + 1) ** config.alpha
            x = x - a_k * ghat
            run.mark(k + 1)
        tracked(x, tie_wins=True)  # the final iterate wins value ties
        run.trajectory[-1] = (run.n_iterations, tracked.best_value)
        run.eval_counts[-1] = tracked.n_evaluations
        return run.finish()

    return _guard_nan(run, body)


# ---------------------------------------------------------------------------
# POWELL


@dataclass(frozen=True)
class PowellConfig:
    max_iter: int = 100  # direction-set cycles
    tol: float = 1e-10  # per-cycle decrease threshold
    line_tol: float = 1e-8  # golden-section interval width
    bracket_step: float = 1.0
    max_line_evals: int = 200


def _bracket(phi, f0, step, max_expand=40):
    """Find (a, b, c) with phi(b) < min(phi(a), phi(c)) starting from 0."""
    a, fa = 0.0, f0
    b = step
    fb = phi(b)
    if fb > fa:
        a, b = b, a
        fa, fb = fb, fa
    c = b + (1.0 / _GOLDEN) * (b - a)
    fc = phi(c)
    for _ in range(max_expand):
        if fc >= fb:
            return (a, b, c) if a < c else (c, b, a), (fa, fb, fc)
        a, b, c = b, c, c + (1.0 / _GOLDEN) * (c - b)
        fa, fb = fb, fc
        fc = phi(c)
    return (a, b, c) if a < c else (c, b, a), (fa, fb, fc)


def _golden_section(phi, bracket, tol, max_iters):
    (a, b, c) = bracket
    x1 = c - _GOLDEN * (c - a)
    x2 = a + _GOLDEN * (c - a)
    f1, f2 = phi(x1), phi(x2)
    best_t, best_f = (x1, f1) if f1 < f2 else (x2, f2)
    for _ in range(max_iters):
        if abs(c - a) < tol:
            break
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - _GOLDEN * (c - a)
            f1 = phi(x1)
            if f1 < best_f:
                best_t, best_f = x1, f1
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (c - a)
            f2 = phi(x2)
            if f2 < best_f:
                best_t, best_f = x2, f2
    return best_t, best_f


def minimize_powell(cost, x0, config: PowellConfig | None = None) -> OptimizerResult:
    """Direction-set method: per cycle, a bracketing + golden-section line
    minimization along each direction, then the shift u_i <- u_{i+1},
    u_n <- x_n - x_0 with one extra line minimization along the new
    direction. Degenerate displacement resets the set to coordinate axes."""
    config = config or PowellConfig()
    tracked = TrackedCost(cost)
    run = _Run(tracked, x0)

    class _LineBudget(Exception):
        pass

    def line_minimize(x, f_x, direction):
        evals = 0

        def phi(t):
            nonlocal evals
            evals += 1
            if evals > config.max_line_evals:
                raise _LineBudget()
            return tracked(x + t * direction)

        try:
            bracket, _ = _bracket(phi, f_x, config.bracket_step)
            t, f_t = _golden_section(
                phi, bracket, config.line_tol, config.max_line_evals
            )
        except _LineBudget:
            return x, f_x
        if f_t < f_x:
            return x + t * direction, f_t
        return x, f_x

    def body():
        x = run.x0.copy()
        n = x.size
        f_x = tracked(x)
        run.mark(0)
        directions = [np.eye(n)[i] for i in range(n)]
        for k in range(1, config.max_iter + 1):
            x_start = x.copy()
            f_start = f_x
            for u in directions:
                x, f_x = line_minimize(x, f_x, u)
            displacement = x - x_start
            norm = float(np.linalg.norm(displacement))
            if norm < 1e-14:
                directions = [np.eye(n)[i] for i in range(n)]
            else:
                directions = directions[1:] + [displacement / norm]
                x, f_x = line_minimize(x, f_x, directions[-1])
            run.mark(k)
            if f_start - f_x < config.tol:
                break
        return run.finish()

    return _guard_nan(run, body)


# ---------------------------------------------------------------------------
# COBYLA (unconstrained linear-model trust-region variant)


@dataclass(frozen=True)
class CobylaConfig:
    initial_radius: float = 1.0
    final_radius: float = 1e-7
    max_iter: int = 200


def minimize_cobyla(cost, x0, config: CobylaConfig | None = None) -> OptimizerResult:
    """Interpolates a linear model on an n+1 simplex, steps the trust radius
    along -grad(L) from the best vertex, replaces the worst vertex, halves
    the radius on non-improvement, stops below the termination radius."""
    config = config or CobylaConfig()
    tracked = TrackedCost(cost)
    run = _Run(tracked, x0)

    def body():
        x = run.x0.copy()
        n = x.size
        f0 = tracked(x)
        run.mark(0)
        radius = config.initial_radius
        if radius <= 0 or radius < config.final_radius:
            return run.finish()

        def seeded_simplex(center, rad, f_center):
            verts = [center.copy()]
            vals = [f_center]
            for j in range(n):
                v = center.copy()
                v[j] += rad
                verts.append(v)
                vals.append(tracked(v))
            return verts, vals

        verts, vals = seeded_simplex(x, radius, f0)
        for k in range(1, config.max_iter + 1):
            if radius < config.final_radius:
                break
            # rows: vertices with trailing 1 -> solve for [g; b]
            a_mat = np.hstack([np.array(verts), np.ones((n + 1, 1))])
            try:
                coeffs = np.linalg.solve(a_mat, np.array(vals))
                degenerate = not np.all(np.isfinite(coeffs))
            except np.linalg.LinAlgError:
                degenerate = True
            if degenerate:
                i_best = int(np.argmin(vals))
                verts, vals = seeded_simplex(verts[i_best], radius, vals[i_best])
                run.mark(k)
                continue
            grad = coeffs[:n]
            g_norm = float(np.linalg.norm(grad))
            best_i = int(np.argmin(vals))
            best_x, best_f = verts[best_i], vals[best_i]
            if g_norm < 1e-300:
                break  # flat linear model: no descent information at this scale
            candidate = best_x - (radius / g_norm) * grad
            f_new = tracked(candidate)
            worst_i = int(np.argmax(vals))
            if worst_i == best_i:  # all equal; replace any non-best
                worst_i = (best_i + 1) % (n + 1)
            verts[worst_i] = candidate
            vals[worst_i] = f_new
            if f_new >= best_f:
                radius *= 0.5
            run.mark(k)
        return run.finish()

    return _guard_nan(run, body)


# ---------------------------------------------------------------------------
# AQGD


class GradientRule(enum.Enum):
    EXACT_SUBGATE = "exact-subgate"
    NAIVE_TWOTERM = "naive-twoterm"


@dataclass(frozen=True)
class AqgdConfig:
    learning_rate: float = 1.0
    momentum: float = 0.25
    max_iter: int = 1000
    tol: float = 1e-6
    mode: GradientRule = GradientRule.NAIVE_TWOTERM
    fd_step: float = 1e-6


def minimize_aqgd(cost, x0, config: AqgdConfig | None = None) -> OptimizerResult:
    """Momentum descent on shift-rule gradients. Costs exposing circuit
    structure (a `shift_gradient(params, mode, on_eval)` method) get the
    configured rule; plain costs fall back to their gradient / central
    finite differences."""
    config = config or AqgdConfig()
    tracked = TrackedCost(cost)
    run = _Run(tracked, x0)
    shift_gradient = getattr(cost, "shift_gradient", None)
    if callable(shift_gradient):
        def grad_fn(x):
            return shift_gradient(x, config.mode.value, on_eval=tracked.record)
    else:
        grad_fn = tracked.gradient_fn(config.fd_step)

    def body():
        x = run.x0.copy()
        f_x = tracked(x)
        run.mark(0)
        velocity = np.zeros_like(x)
        for k in range(1, config.max_iter + 1):
            g = grad_fn(x)
            velocity = config.momentum * velocity - config.learning_rate * g
            x = x + velocity
            f_new = tracked(x)
            run.mark(k)
            if abs(f_new - f_x) < config.tol:
                f_x = f_new
                break
            f_x = f_new
        return run.finish()

    return _guard_nan(run, body)


# ---------------------------------------------------------------------------
# NFT (sequential three-point sinusoid fits)


class IndexOrder(enum.Enum):
    SEQUENTIAL = "sequential"
    RANDOM = "random"


@dataclass(frozen=True)
class NftConfig:
    max_iter: int = 100  # full parameter sweeps
    index_order: IndexOrder = IndexOrder.SEQUENTIAL
    tol: float = 0.0  # per-sweep decrease threshold; 0 runs all sweeps
    flat_threshold: float = 1e-14


def _wrap_angle(t: float) -> float:
    t = t % (2.0 * math.pi)
    return t - 2.0 * math.pi if t > math.pi else t


def minimize_nft(cost, x0, config: NftConfig | None = None,
                 seed: int | None = 0) -> OptimizerResult:
    """Per update: evaluate the cost at theta_j and theta_j +- pi/2, solve
    the three-point fit a1*cos(theta - a2) + a3, jump to the argmin
    a2 + pi. Sequential order reuses the fitted minimum as the next
    update's center value (two evaluations per update after the first)."""
    config = config or NftConfig()
    tracked = TrackedCost(cost)
    run = _Run(tracked, x0)
    rng = np.random.default_rng(seed)

    def body():
        x = run.x0.copy()
        n = x.size
        e_center = tracked(x)
        run.mark(0)
        center_valid = True
        for k in range(1, config.max_iter + 1):
            sweep_start = tracked.best_value
            if config.index_order is IndexOrder.SEQUENTIAL:
                order = range(n)
            else:
                order = [int(i) for i in rng.integers(0, n, size=n)]
            for j in order:
                if not center_valid:
                    e_center = tracked(x)
                    center_valid = True
                plus = x.copy()
                plus[j] += math.pi / 2
                minus = x.copy()
                minus[j] -= math.pi / 2
                e_plus = tracked(plus)
                e_minus = tracked(minus)
                a3 = 0.5 * (e_plus + e_minus)
                a_cos = e_center - a3
                a_sin = 0.5 * (e_minus - e_plus)
                a1 = math.hypot(a_cos, a_sin)
                if a1 < config.flat_threshold:
                    continue
                a2 = x[j] - math.atan2(a_sin, a_cos)
                x[j] = _wrap_angle(a2 + math.pi)
                if config.index_order is IndexOrder.SEQUENTIAL:
                    e_center = a3 - a1
                else:
                    center_valid = False
            run.mark(k)
            if config.tol > 0 and sweep_start - tracked.best_value < config.tol:
                break
        tracked(x, tie_wins=True)  # pin the final iterate with a real evaluation
        run.trajectory[-1] = (run.n_iterations, tracked.best_value)
        run.eval_counts[-1] = tracked.n_evaluations
        return run.finish()

    return _guard_nan(run, body)


# ---------------------------------------------------------------------------
# Dispatch

OPTIMIZER_NAMES = (
    "gd", "adam", "cg", "lbfgs", "nelder-mead",
    "spsa", "powell", "cobyla", "aqgd", "nft",
)


def minimize(method: str, cost, x0, *, max_iter: int | None = None,
             seed: int | None = 0, options: dict | None = None) -> OptimizerResult:
    """Name-based dispatch used by the VQE driver and the CLI."""
    method = method.lower()
    options = dict(options or {})
    if method not in OPTIMIZER_NAMES:
        raise DomainError(f"unknown optimizer {method!r}; choose from {OPTIMIZER_NAMES}")
    if method in ("gd", "adam", "cg", "lbfgs", "nelder-mead"):
        config = SmoothConfig(**options)
        if max_iter is not None:
            config = replace(config, max_iter=max_iter)
        return minimize_smooth(method, cost, x0, config)
    if method == "spsa":
        config = SpsaConfig(**options)
        if max_iter is not None:
            config = replace(config, max_iter=max_iter)
        return minimize_spsa(cost, x0, config, seed=seed)
    if method == "powell":
        config = PowellConfig(**options)
        if max_iter is not None:
            config = replace(config, max_iter=max_iter)
        return minimize_powell(cost, x0, config)
    if method == "cobyla":
        config = CobylaConfig(**options)
        if max_iter is not None:
            config = replace(config, max_iter=max_iter)
        return minimize_cobyla(cost, x0, config)
    if method == "aqgd":
        if "mode" in options and isinstance(options["mode"], str):
            options["mode"] = GradientRule(options["mode"])
        config = AqgdConfig(**options)
        if max_iter is not None:
            config = replace(config, max_iter=max_iter)
        return minimize_aqgd(cost, x0, config)
    if "index_order" in options and isinstance(options["index_order"], str):
        options["index_order"] = IndexOrder(options["index_order"])
    config = NftConfig(**options)
    if max_iter is not None:
        config = replace(config, max_iter=max_iter)
    return minimize_nft(cost, x0, config, seed=seed)
