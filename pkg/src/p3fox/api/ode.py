"""Continuation of u_n in the complex plane through poles.

Notes:
    Integration uses the embedded Dormand-Prince 5(4) pair on the first
    order system y' = dy, dy' = piii_rhs. Poles of u are crossed in the
    chart v = 1/u, which solves the equation with parameters (-beta, -alpha).
"""

import asyncio
import cmath
import logging

import numpy as np
from numpy.typing import NDArray

from p3fox.api.expansion import DEFAULT_BUDGET, expand_u, series_derivative, series_eval
from p3fox.api.painleve import piii_rhs_values
from p3fox.models.params import SolutionParams
from p3fox.models.trajectory import ChartState, GridResult, GridSpec, Trajectory
from p3fox.utilities.errors import (
    DomainError,
    SeedError,
    SingularError,
    StallError,
    StepError,
    ZeroError,
)

logger = logging.getLogger(__name__)

SWITCH_OUT = 2.0
POLE_MARK = 1e-3
EXCLUSION_RADIUS = 0.05
SEED_X = 0.05
MIN_STEP = 1e-12
MAX_ATTEMPTS = 1_000_000
DEFAULT_TOL = 1e-9

# ===== Dormand-Prince 5(4) tableau
_NODES = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_COUPLING = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_WEIGHTS = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_ERROR_WEIGHTS = np.array(
    [71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

# PI controller
_SAFETY = 0.9
_ORDER = 5
_GROWTH_MAX = 5.0
_GROWTH_MIN = 0.2
_SHRINK_MAX = 0.9
_RATIO_FLOOR = 1e-10


def _system(state: ChartState, x: complex, y: NDArray[np.complex128]) -> NDArray[np.complex128]:
    p = state.params
    try:
        d2y = piii_rhs_values(x, y[0], y[1], p.alpha, p.beta)
    except SingularError as exc:
        raise StepError(f"stage at x={x} hits a singular value") from exc
    return np.array([y[1], d2y], dtype=np.complex128)


def rk_step(state: ChartState, h: complex) -> tuple[ChartState, float]:
    """One embedded Dormand-Prince step of size h.

    Args:
        state: Current state, y in chart bounds.
        h: Complex step along the path.

    Returns:
        The advanced state and the error norm
        max(|e_y|/(1+|y|), |e_dy|/(1+|dy|)).

    Raises:
        StepError: On nonfinite stage values.

    """
    if h == 0:
        return state, 0.0

    y0 = np.array([state.y, state.dy], dtype=np.complex128)
    stages = np.zeros((7, 2), dtype=np.complex128)
    with np.errstate(all="ignore"):
        for i, row in enumerate(_COUPLING):
            increment = y0 + h * sum(
                (weight * stages[j] for j, weight in enumerate(row)),
                start=np.zeros(2, dtype=np.complex128),
            )
            stages[i] = _system(state, state.x + _NODES[i] * h, increment)
            if not np.all(np.isfinite(stages[i])):
                raise StepError(f"nonfinite stage {i} at x={state.x}, h={h}")

        y1 = y0 + h * (_WEIGHTS @ stages)
        error = h * (_ERROR_WEIGHTS @ stages)

    if not np.all(np.isfinite(y1)):
        raise StepError(f"nonfinite step result at x={state.x}, h={h}")

    norm = max(
        abs(error[0]) / (1 + abs(y1[0])),
        abs(error[1]) / (1 + abs(y1[1])),
    )
    advanced = state.model_copy(
        update={"x": state.x + h, "y": complex(y1[0]), "dy": complex(y1[1])}
    )
    return advanced, float(norm)


def chart_switch(state: ChartState) -> ChartState:
    """Swap u and 1/u, an involution on states.

    Raises:
        ZeroError: At y = 0.

    """
    if state.y == 0:
        raise ZeroError(f"cannot invert y=0 at x={state.x}")
    return ChartState(
        x=state.x,
        y=1 / state.y,
        dy=-state.dy / (state.y * state.y),
        chart="V" if state.chart == "U" else "U",
        params=state.params.inverted(),
    )


def _distance_to_origin(a: complex, b: complex) -> float:
    direction = b - a
    if direction == 0:
        return abs(a)
    t = -(a.real * direction.real + a.imag * direction.imag) / abs(direction) ** 2
    t = min(1.0, max(0.0, t))
    return abs(a + t * direction)


def segment_is_safe(a: complex, b: complex, radius: float = EXCLUSION_RADIUS) -> bool:
    """True when the segment from a to b stays outside the exclusion disc."""
    return _distance_to_origin(a, b) >= radius


def _maybe_switch(state: ChartState) -> ChartState | None:
    if abs(state.y) > SWITCH_OUT:
        return chart_switch(state)
    return None


def trace(
    start: ChartState,
    path: list[complex],
    tol: float = DEFAULT_TOL,
    seed_error: float | None = None,
) -> Trajectory:
    """Integrate along the piecewise linear path through the waypoints.

    A step of length |h| is accepted when its error norm is at most tol*|h|,
    so tol bounds the error per unit path length.

    Args:
        start: Initial state.
        path: Waypoints visited in order, endpoints hit exactly.
        tol: Accepted error per unit path length.
        seed_error: Error estimate of the start state, kept on the result.

    Returns:
        Trajectory with one sample per accepted step, the start included.

    Raises:
        DomainError: When a segment enters the disc of radius 0.05 at 0.
        StallError: When the step size falls below 1e-12 or the attempt
            budget runs out.

    """
    corners = [start.x, *path]
    for a, b in zip(corners, corners[1:]):
        if not segment_is_safe(a, b):
            raise DomainError(f"segment {a} -> {b} enters the exclusion disc at 0")

    state = start
    samples = [state]
    steps = rejected = switches = 0
    step = 0.01
    previous_ratio: float | None = None

    for waypoint in path:
        while state.x != waypoint:
            if steps + rejected >= MAX_ATTEMPTS:
                raise StallError(
                    f"no arrival at {waypoint} after {MAX_ATTEMPTS} attempts, x={state.x}"
                )
            remaining = abs(waypoint - state.x)
            direction = (waypoint - state.x) / remaining
            size = min(step, remaining)
            last = size >= remaining

            try:
                candidate, error = rk_step(state, direction * size)
            except StepError as exc:
                logger.debug("rejected step at x=%s: %s", state.x, exc)
                rejected += 1
                step = size / 2
                if step < MIN_STEP:
                    raise StallError(f"step underflow at x={state.x}") from exc
                continue

            ratio = error / (tol * size)
            if ratio > 1:
                rejected += 1
                shrink = _SAFETY * ratio ** (-1 / _ORDER)
                step = size * min(_SHRINK_MAX, max(_GROWTH_MIN, shrink))
                if step < MIN_STEP:
                    raise StallError(
                        f"step underflow at x={state.x}, error {error:.3e}"
                    )
                continue

            if last:
                candidate = candidate.model_copy(update={"x": waypoint})
            state = candidate
            steps += 1

            switched = _maybe_switch(state)
            if switched is not None:
                logger.debug("chart %s -> %s at x=%s", state.chart, switched.chart, state.x)
                state = switched
                switches += 1
            samples.append(state)

            ratio = max(ratio, _RATIO_FLOOR)
            factor = _SAFETY * ratio ** (-0.7 / _ORDER)
            if previous_ratio is not None:
                factor *= previous_ratio ** (0.4 / _ORDER)
            step = size * min(_GROWTH_MAX, max(_GROWTH_MIN, factor))
            previous_ratio = ratio

    if steps and 2 * rejected > steps + rejected:
        logger.warning(
            "trace to %s rejected %d of %d steps",
            path[-1] if path else start.x,
            rejected,
            steps + rejected,
        )
    logger.info(
        "trace done: %d steps, %d rejected, %d chart switches", steps, rejected, switches
    )
    return Trajectory(
        samples=samples,
        steps=steps,
        rejected=rejected,
        switches=switches,
        seed_error=seed_error,
    )


def seed_state(
    params: SolutionParams, x0: complex = SEED_X, budget: float = DEFAULT_BUDGET
) -> tuple[ChartState, float]:
    """Start state at x0 from the small-x series.

    Returns:
        The state, in chart V when |u| > 2, and the modulus of the last
        included series term at x0.

    """
    series = expand_u(params, budget)
    u = series_eval(series, x0)
    du = series_eval(series_derivative(series), x0)

    key, coefficient = series.ordered()[-1]
    seed_error = abs(coefficient * cmath.exp(series.exponent(key) * cmath.log(x0)))

    state = ChartState(x=x0, y=u, dy=du, chart="U", params=params.piii())
    if abs(u) > SWITCH_OUT:
        state = chart_switch(state)
    return state, seed_error


# ===== grid


def _spine_position(spec: GridSpec) -> float:
    return max(0.1, min(max(spec.x_min, 0.5), spec.x_max))


def _record(state: ChartState) -> tuple[complex, str]:
    if state.chart == "V" and abs(state.y) < POLE_MARK:
        return state.u(), "pole"
    return state.u(), "ok"


def _trace_row(
    spine_state: ChartState,
    nodes: list[complex],
    tol: float,
) -> list[tuple[complex, str]]:
    """Values at nodes visited in order from the spine state."""
    out: list[tuple[complex, str]] = []
    state = spine_state
    failed = False
    for node in nodes:
        if failed or abs(node) < EXCLUSION_RADIUS or not segment_is_safe(state.x, node):
            failed = True
            out.append((complex("nan"), "failed"))
            continue
        try:
            state = trace(state, [node], tol).end
        except (StallError, StepError) as exc:
            logger.warning("row trace failed near %s: %s", node, exc)
            failed = True
            out.append((complex("nan"), "failed"))
            continue
        out.append(_record(state))
    return out


def _fill_row(
    spine_state: ChartState,
    real_nodes: NDArray[np.float64],
    imag: float,
    spine: float,
    tol: float,
) -> tuple[list[complex], list[str]]:
    right = [k for k, re in enumerate(real_nodes) if re >= spine]
    left = [k for k, re in enumerate(real_nodes) if re < spine][::-1]

    values: list[complex] = [complex("nan")] * len(real_nodes)
    status: list[str] = ["failed"] * len(real_nodes)
    for indices in (right, left):
        nodes = [complex(real_nodes[k], imag) for k in indices]
        for k, (value, label) in zip(indices, _trace_row(spine_state, nodes, tol)):
            values[k] = value
            status[k] = label
    return values, status


def _spine_states(
    base: ChartState, spine: float, imag_nodes: NDArray[np.float64], tol: float
) -> list[ChartState]:
    states: list[ChartState | None] = [None] * len(imag_nodes)
    upward = [j for j, im in enumerate(imag_nodes) if im >= 0]
    downward = [j for j, im in enumerate(imag_nodes) if im < 0][::-1]
    for indices in (upward, downward):
        state = base
        for j in indices:
            state = trace(state, [complex(spine, imag_nodes[j])], tol).end
            states[j] = state
    return [state for state in states if state is not None]


async def grid_async(
    params: SolutionParams,
    spec: GridSpec,
    tol: float = DEFAULT_TOL,
    budget: float = DEFAULT_BUDGET,
) -> GridResult:
    """Values of u_n on a complex grid, one worker thread per row.

    Raises:
        SeedError: When the series seed or the spine trace fails.

    """
    spine = _spine_position(spec)
    real_nodes = spec.real_nodes()
    imag_nodes = spec.imag_nodes()

    try:
        seed, seed_error = seed_state(params, SEED_X, budget)
        logger.info("seed at x=%s, error estimate %.2e", SEED_X, seed_error)
        base = trace(seed, [complex(spine)], tol, seed_error).end
        spine_states = _spine_states(base, spine, imag_nodes, tol)
    except (StallError, StepError) as exc:
        raise SeedError(f"spine trace failed: {exc}") from exc

    rows = await asyncio.gather(
        *[
            asyncio.to_thread(_fill_row, spine_states[j], real_nodes, float(im), spine, tol)
            for j, im in enumerate(imag_nodes)
        ]
    )

    values = np.full((spec.nx, spec.ny), complex("nan"), dtype=np.complex128)
    status = np.full((spec.nx, spec.ny), "failed", dtype="<U6")
    for j, (row_values, row_status) in enumerate(rows):
        values[:, j] = row_values
        status[:, j] = row_status

    result = GridResult(spec=spec, values=values, status=status)
    logger.info("grid done: %s", result.counts())
    return result


def grid(
    params: SolutionParams,
    spec: GridSpec,
    tol: float = DEFAULT_TOL,
    budget: float = DEFAULT_BUDGET,
) -> GridResult:
    """Blocking form of grid_async."""
    return asyncio.run(grid_async(params, spec, tol, budget))
