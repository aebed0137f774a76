"""Markov-basis moves, fiber enumeration, fiber walks, and exact tests.

Move factories produce canonical representatives (the opposite orientation
of every move is reached by applying it with sign -1).  The enumeration
routines are deliberately simple backtracking with margin pruning: they are
the oracle against which the sampler is calibrated, so clarity beats speed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import BudgetExceededError, InputError, SizeMismatchError
from .params import expected_counts
from .tables import (
    CountTable,
    ModelFamily,
    ModelForm,
    ModelSpec,
    Move,
    SufficientStat,
    sufficient_statistic,
)

DEFAULT_NODE_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# move factories
# ---------------------------------------------------------------------------

def _canonical_signed(cells) -> tuple:
    flat = [x for row in cells for x in row]
    first = next((x for x in flat if x != 0), 0)
    if first < 0:
        return tuple(tuple(-x for x in row) for row in cells)
    return tuple(tuple(x for x in row) for row in cells)


def _dedupe(moves: Iterable[Move]) -> List[Move]:
    seen: Dict[tuple, Move] = {}
    for m in moves:
        key = _canonical_signed(m.cells)
        if key not in seen:
            seen[key] = Move(size=m.size, cells=key, label=m.label)
    return list(seen.values())


def _grid(I: int, entries: Dict[Tuple[int, int], int]) -> tuple:
    g = [[0] * I for _ in range(I)]
    for (i, j), v in entries.items():
        g[i - 1][j - 1] = v
    return tuple(tuple(row) for row in g)


def moves_diag_effect(I: int) -> List[Move]:
    """Minimal move family of the diagonal-effect model.

    Degree-2 rectangle swaps over four pairwise distinct indices (I >= 4)
    and one degree-3 cycle per unordered triple (I >= 3).  No move touches
    a diagonal cell: diagonal counts are part of the sufficient statistic.
    """
    if I < 3:
        raise InputError("diagonal-effect moves need I >= 3")
    moves = []
    idx = range(1, I + 1)
    for i in idx:
        for k in idx:
            if k <= i:
                continue
            for j in idx:
                if j in (i, k):
                    continue
                for h in idx:
                    if h <= j or h in (i, k):
                        continue
                    moves.append(Move(size=I, label="rect", cells=_grid(I, {
                        (i, j): 1, (i, h): -1, (k, j): -1, (k, h): 1,
                    })))
    for a in idx:
        for b in idx:
            if b <= a:
                continue
            for c in idx:
                if c <= b:
                    continue
                moves.append(Move(size=I, label="cycle", cells=_grid(I, {
                    (a, b): 1, (a, c): -1,
                    (b, a): -1, (b, c): 1,
                    (c, a): 1, (c, b): -1,
                })))
    return _dedupe(moves)


def moves_common_diag(I: int) -> List[Move]:
    """Move family of the common-diagonal-effect model.

    The two diagonal-effect families plus four families that shift counts
    along the diagonal while preserving its total: degree-3 diagonal shifts
    on a triple (three variants), degree-3 shifts over four indices
    (I >= 4), degree-4 moves with a +-2 column, and degree-4 moves on a
    2 x 4 block (I >= 4); the last two come with their transposes.
    """
    if I < 3:
        raise InputError("common-diagonal moves need I >= 3")
    moves = list(moves_diag_effect(I))
    idx = range(1, I + 1)

    for (a, b, c) in permutations(idx, 3):
        # the three diagonal-shift variants on rows/columns (a, b, c)
        moves.append(Move(size=I, label="diag-shift", cells=_grid(I, {
            (a, a): 1, (a, c): -1,
            (b, b): -1, (b, c): 1,
            (c, a): -1, (c, b): 1,
        })))
        moves.append(Move(size=I, label="diag-shift", cells=_grid(I, {
            (a, a): 1, (a, b): -1,
            (b, a): -1, (b, c): 1,
            (c, b): 1, (c, c): -1,
        })))
        moves.append(Move(size=I, label="diag-shift", cells=_grid(I, {
            (a, b): -1, (a, c): 1,
            (b, a): -1, (b, b): 1,
            (c, a): 1, (c, c): -1,
        })))

    if I >= 4:
        for (i, k, j, h) in permutations(idx, 4):
            # rows (i, k, h), columns (i, k, j)
            moves.append(Move(size=I, label="diag-shift-rect", cells=_grid(I, {
                (i, i): 1, (i, j): -1,
                (k, k): -1, (k, j): 1,
                (h, i): -1, (h, k): 1,
            })))

    double = []
    for i in idx:
        for k in idx:
            if k <= i:
                continue
            for j in idx:
                if j in (i, k):
                    continue
                double.append(Move(size=I, label="diag-double", cells=_grid(I, {
                    (i, i): 1, (i, k): 1, (i, j): -2,
                    (k, i): -1, (k, k): -1, (k, j): 2,
                })))
    moves.extend(double)
    moves.extend(m.transposed() for m in double)

    if I >= 4:
        quad = []
        for i in idx:
            for k in idx:
                if k <= i:
                    continue
                for j in idx:
                    if j in (i, k):
                        continue
                    for h in idx:
                        if h <= j or h in (i, k):
                            continue
                        quad.append(Move(size=I, label="diag-quad", cells=_grid(I, {
                            (i, i): 1, (i, k): 1, (i, j): -1, (i, h): -1,
                            (k, i): -1, (k, k): -1, (k, j): 1, (k, h): 1,
                        })))
        moves.extend(quad)
        moves.extend(m.transposed() for m in quad)

    return _dedupe(moves)


def moves_for_model(model: ModelSpec) -> List[Move]:
    if model.family is ModelFamily.DIAGONAL_EFFECT:
        return moves_diag_effect(model.size)
    if model.family is ModelFamily.COMMON_DIAGONAL_EFFECT:
        return moves_common_diag(model.size)
    raise InputError(f"no move factory for {model.family.value}")


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fiber:
    stat: SufficientStat
    model: ModelSpec
    tables: tuple  # of CountTable

    def __len__(self) -> int:
        return len(self.tables)


def enumerate_fiber(
    stat: SufficientStat,
    model: ModelSpec,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Fiber:
    """All nonnegative integer tables with the given sufficient statistic.

    Row-by-row backtracking with column-remainder pruning; for the
    common-diagonal family the remaining diagonal total is bounded by the
    remaining margins.  Exceeding `node_budget` visited nodes raises
    BudgetExceededError (switch to the sampler in that case).
    """
    if stat.family is not model.family:
        raise InputError("statistic and model families differ")
    if stat.size != model.size:
        raise SizeMismatchError(f"statistic size {stat.size} != model size {model.size}")
    I = stat.size
    rows, cols = stat.rows, stat.cols
    diag_vec = stat.diag if stat.family is ModelFamily.DIAGONAL_EFFECT else None
    diag_sum = stat.diag if stat.family is ModelFamily.COMMON_DIAGONAL_EFFECT else None
    if model.structural_zero_diagonal:
        if diag_vec is None or any(d != 0 for d in diag_vec):
            raise InputError("structural-zero diagonal requires a zero diagonal vector")

    grid = [[0] * I for _ in range(I)]
    colrem = list(cols)
    found: List[tuple] = []
    nodes = 0

    def fill(i: int, j: int, rowrem: int, diagrem: Optional[int]):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError(
                f"fiber enumeration exceeded the {node_budget}-node budget"
            )
        if i == I:
            if diagrem is None or diagrem == 0:
                found.append(tuple(tuple(r) for r in grid))
            return
        if j == I:
            if rowrem == 0:
                fill(i + 1, 0, rows[i + 1] if i + 1 < I else 0, diagrem)
            return
        lo = hi = None
        if j == I - 1:
            lo = hi = rowrem
        else:
            lo, hi = 0, rowrem
        hi = min(hi, colrem[j])
        if i == j:
            if diag_vec is not None:
                lo = hi = diag_vec[i] if lo <= diag_vec[i] <= hi else -1
                if lo == -1:
                    return
            elif diagrem is not None:
                hi = min(hi, diagrem)
        if lo > hi:
            return
        for v in range(lo, hi + 1):
            grid[i][j] = v
            colrem[j] -= v
            new_diagrem = diagrem
            if diagrem is not None and i == j:
                new_diagrem = diagrem - v
                # remaining diagonal cells can absorb at most their margin bounds
                cap = sum(min(rows[k], colrem[k]) for k in range(i + 1, I))
                if new_diagrem > cap:
                    grid[i][j] = 0
                    colrem[j] += v
                    continue
            fill(i, j + 1, rowrem - v, new_diagrem)
            colrem[j] += v
            grid[i][j] = 0

    fill(0, 0, rows[0] if I else 0, diag_sum)
    tables = tuple(CountTable(size=I, cells=t) for t in sorted(found))
    return Fiber(stat=stat, model=model, tables=tables)


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    components: tuple  # of tuples of CountTable


def is_connected(fiber: Fiber, moves: Sequence[Move]) -> ConnectivityReport:
    """Graph connectivity of the fiber under single-move transitions."""
    index = {t.cells: k for k, t in enumerate(fiber.tables)}
    n = len(fiber.tables)
    if n <= 1:
        return ConnectivityReport(connected=True, components=(tuple(fiber.tables),) if n else ())
    deltas = _move_deltas(moves, fiber.stat.size)
    seen = [False] * n
    components = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            k = stack.pop()
            comp.append(k)
            flat = [x for row in fiber.tables[k].cells for x in row]
            for delta in deltas:
                neighbor = _apply_delta(flat, delta, fiber.stat.size)
                if neighbor is None:
                    continue
                kn = index.get(neighbor)
                if kn is not None and not seen[kn]:
                    seen[kn] = True
                    stack.append(kn)
        components.append(tuple(fiber.tables[k] for k in sorted(comp)))
    return ConnectivityReport(connected=len(components) == 1, components=tuple(components))


def _move_deltas(moves: Sequence[Move], I: int) -> List[tuple]:
    deltas = []
    for m in moves:
        flat = [x for row in m.cells for x in row]
        entries = tuple((k, v) for k, v in enumerate(flat) if v)
        deltas.append(entries)
        deltas.append(tuple((k, -v) for k, v in entries))
    return deltas


def _apply_delta(flat: List[int], delta: tuple, I: int) -> Optional[tuple]:
    out = list(flat)
    for k, v in delta:
        nv = out[k] + v
        if nv < 0:
            return None
        out[k] = nv
    return tuple(tuple(out[i * I + j] for j in range(I)) for i in range(I))


# ---------------------------------------------------------------------------
# fiber walk
# ---------------------------------------------------------------------------

class Stationary(Enum):
    UNIFORM = "uniform"
    HYPERGEOMETRIC = "hypergeometric"


@dataclass(frozen=True)
class WalkConfig:
    """Chain length, burn-in, thinning, seed, and target stationary law.

    The default burn-in of 10 * sqrt(steps) is an arbitrary, documented
    default; every result echoes the configuration actually used.
    """

    steps: int
    burn_in: Optional[int] = None
    thinning: int = 1
    seed: int = 0
    stationary: Stationary = Stationary.HYPERGEOMETRIC

    def __post_init__(self):
        if self.steps <= 0:
            raise InputError("steps must be positive")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", int(10 * math.isqrt(self.steps)))
        if self.burn_in < 0 or self.thinning < 0:
            raise InputError("burn_in and thinning must be nonnegative")
        if self.thinning == 0:
            object.__setattr__(self, "thinning", 1)

    def to_dict(self) -> dict:
        return {
            "steps": self.steps,
            "burn_in": self.burn_in,
            "thinning": self.thinning,
            "seed": self.seed,
            "stationary": self.stationary.value,
        }


def _acceptance_ratio(flat: List[int], delta: tuple) -> Fraction:
    """Hypergeometric Metropolis ratio prod f! / prod f'! over changed cells."""
    ratio = Fraction(1)
    for k, v in delta:
        old = flat[k]
        new = old + v
        if v > 0:
            for x in range(old + 1, new + 1):
                ratio /= x
        else:
            for x in range(new + 1, old + 1):
                ratio *= x
    return ratio


def fiber_walk(start: CountTable, moves: Sequence[Move], config: WalkConfig) -> Iterator[CountTable]:
    """Metropolis fiber walk; emits post-burn-in, thinned states.

    Proposals draw a move and a sign uniformly; an infeasible proposal is a
    stay-in-place step, which keeps the proposal kernel symmetric.  Under
    the uniform law every feasible proposal is accepted; under the
    hypergeometric law the exact factorial ratio decides.
    """
    if not moves:
        raise InputError("fiber_walk needs at least one move")
    I = start.size
    for m in moves:
        if m.size != I:
            raise SizeMismatchError("move size differs from table size")
    deltas = _move_deltas(moves, I)
    rng = random.Random(f"fiber-walk|{config.seed}")
    flat = [x for row in start.cells for x in row]
    total = config.burn_in + config.steps
    for step in range(total):
        delta = deltas[rng.randrange(len(deltas))]
        feasible = True
        for k, v in delta:
            if flat[k] + v < 0:
                feasible = False
                break
        if feasible:
            if config.stationary is Stationary.UNIFORM:
                accept = True
            else:
                ratio = _acceptance_ratio(flat, delta)
                accept = ratio >= 1 or rng.random() < ratio
            if accept:
                for k, v in delta:
                    flat[k] += v
        if step >= config.burn_in and (step - config.burn_in) % config.thinning == 0:
            yield CountTable(
                size=I,
                cells=tuple(tuple(flat[i * I + j] for j in range(I)) for i in range(I)),
            )


# ---------------------------------------------------------------------------
# exact tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestResult:
    statistic_observed: float
    p_value: float
    monte_carlo_stderr: float
    samples_used: int
    method: str  # "MCMC" | "Enumeration"
    config: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "statistic_observed": self.statistic_observed,
            "p_value": self.p_value,
            "monte_carlo_stderr": self.monte_carlo_stderr,
            "samples_used": self.samples_used,
            "method": self.method,
            "config": self.config,
        }


def pearson_statistic(cells, expected) -> float:
    """Pearson chi-square against fitted expected counts.

    Cells with zero expectation contribute nothing when observed is zero
    and infinity otherwise; within a fiber the margins rule the latter out.
    """
    chi2 = 0.0
    for orow, erow in zip(cells, expected):
        for o, e in zip(orow, erow):
            if e > 0.0:
                chi2 += (o - e) ** 2 / e
            elif o != 0:
                return math.inf
    return chi2


def _chi2_threshold(observed: float) -> float:
    return observed - 1e-9 * (1.0 + abs(observed))


def exact_test(
    table: CountTable,
    model: ModelSpec,
    config: Optional[WalkConfig] = None,
    method: str = "auto",
    node_budget: int = 200_000,
) -> TestResult:
    """Exact conditional goodness-of-fit test on the model's fiber.

    The statistic is Pearson chi-square against the model fit, which
    depends only on the sufficient statistic and is therefore constant
    across the fiber.  The p-value is the hypergeometric-law probability of
    a statistic at least as large as observed: exact by total enumeration
    when the fiber is within budget, otherwise estimated by the fiber walk
    with a batch-means Monte Carlo standard error.
    """
    if table.n == 0:
        raise InputError("exact test needs a nonzero table")
    if method not in ("auto", "mcmc", "enumerate"):
        raise InputError(f"unknown method {method!r}")
    expected = expected_counts(table, model)
    observed_stat = pearson_statistic(table.cells, expected)
    threshold = _chi2_threshold(observed_stat)

    if method in ("auto", "enumerate"):
        try:
            fiber = enumerate_fiber(sufficient_statistic(table, model), model, node_budget)
        except BudgetExceededError:
            if method == "enumerate":
                raise
            fiber = None
        if fiber is not None:
            # hypergeometric weights n!/prod f! are exact integers; n! cancels
            hit_weight = total_weight = Fraction(0)
            for t in fiber.tables:
                w = Fraction(1)
                for row in t.cells:
                    for x in row:
                        w /= math.factorial(x)
                total_weight += w
                if pearson_statistic(t.cells, expected) >= threshold:
                    hit_weight += w
            p = float(hit_weight / total_weight)
            return TestResult(
                statistic_observed=observed_stat,
                p_value=p,
                monte_carlo_stderr=0.0,
                samples_used=len(fiber.tables),
                method="Enumeration",
                config={"node_budget": node_budget},
            )

    if config is None:
        config = WalkConfig(steps=50_000, stationary=Stationary.HYPERGEOMETRIC)
    if config.stationary is not Stationary.HYPERGEOMETRIC:
        raise InputError("the sampling test requires the hypergeometric stationary law")
    moves = moves_for_model(model)
    indicators = []
    for state in fiber_walk(table, moves, config):
        indicators.append(1.0 if pearson_statistic(state.cells, expected) >= threshold else 0.0)
    p = sum(indicators) / len(indicators)
    stderr = _batch_means_stderr(indicators)
    return TestResult(
        statistic_observed=observed_stat,
        p_value=p,
        monte_carlo_stderr=stderr,
        samples_used=len(indicators),
        method="MCMC",
        config=config.to_dict(),
    )


def exact_test_chains(
    table: CountTable,
    model: ModelSpec,
    config: WalkConfig,
    chains: int,
) -> TestResult:
    """Pool several independent MCMC chains, merged by chain index.

    Chain k reuses the base configuration with seed + k; the pooled
    p-value is the mean of the chain means and the standard error comes
    from the spread across chains.
    """
    if chains < 1:
        raise InputError("chains must be at least 1")
    if chains == 1:
        return exact_test(table, model, config, method="mcmc")
    results = []
    for k in range(chains):
        chain_config = WalkConfig(
            steps=config.steps,
            burn_in=config.burn_in,
            thinning=config.thinning,
            seed=config.seed + k,
            stationary=config.stationary,
        )
        results.append(exact_test(table, model, chain_config, method="mcmc"))
    p = sum(r.p_value for r in results) / chains
    var = sum((r.p_value - p) ** 2 for r in results) / (chains - 1)
    merged_config = dict(config.to_dict(), chains=chains)
    return TestResult(
        statistic_observed=results[0].statistic_observed,
        p_value=p,
        monte_carlo_stderr=math.sqrt(var / chains),
        samples_used=sum(r.samples_used for r in results),
        method="MCMC",
        config=merged_config,
    )


def _batch_means_stderr(values: Sequence[float]) -> float:
    """Standard error of the mean of a correlated chain via batch means."""
    n = len(values)
    if n < 2:
        return 0.0
    batches = min(64, max(8, n // 500))
    length = n // batches
    if length < 1:
        mean = sum(values) / n
        return math.sqrt(max(mean * (1 - mean), 0.0) / n)
    means = []
    for b in range(batches):
        chunk = values[b * length:(b + 1) * length]
        means.append(sum(chunk) / len(chunk))
    grand = sum(means) / batches
    var = sum((m - grand) ** 2 for m in means) / (batches - 1)
    return math.sqrt(var / batches)


# ---------------------------------------------------------------------------
# desk-scale connectivity verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepReport:
    family: ModelFamily
    size: int
    max_n: int
    fibers_checked: int
    tables_seen: int
    largest_fiber: int
    disconnected: tuple  # of (stat, component sizes)

    @property
    def all_connected(self) -> bool:
        return not self.disconnected


def _all_tables_flat(I: int, total: int) -> Iterator[tuple]:
    """Every nonnegative integer I*I vector with the given total."""
    cells = I * I
    vec = [0] * cells

    def rec(pos: int, left: int):
        if pos == cells - 1:
            vec[pos] = left
            yield tuple(vec)
            vec[pos] = 0
            return
        for v in range(left + 1):
            vec[pos] = v
            yield from rec(pos + 1, left - v)
            vec[pos] = 0

    yield from rec(0, total)


def _stat_key(flat: tuple, I: int, family: ModelFamily) -> tuple:
    rows = tuple(sum(flat[i * I + j] for j in range(I)) for i in range(I))
    cols = tuple(sum(flat[i * I + j] for i in range(I)) for j in range(I))
    diag = tuple(flat[i * I + i] for i in range(I))
    if family is ModelFamily.COMMON_DIAGONAL_EFFECT:
        return rows, cols, sum(diag)
    return rows, cols, diag


def verify_connectivity(
    family: ModelFamily,
    I: int,
    max_n: int,
    moves: Optional[Sequence[Move]] = None,
) -> SweepReport:
    """Exhaustively check that every fiber arising from tables with total
    count up to max_n is connected under the family's moves.

    Grouping all tables by sufficient statistic yields each complete fiber
    directly, independently of `enumerate_fiber`; a disconnected fiber is
    reported with its component sizes, never patched.
    """
    model = ModelSpec(family=family, form=ModelForm.TORIC, size=I)
    if moves is None:
        moves = moves_for_model(model)
    deltas = _move_deltas(moves, I)

    fibers: Dict[tuple, List[tuple]] = {}
    tables_seen = 0
    for n in range(max_n + 1):
        for flat in _all_tables_flat(I, n):
            tables_seen += 1
            fibers.setdefault(_stat_key(flat, I, family), []).append(flat)

    disconnected = []
    largest = 0
    for key, members in fibers.items():
        largest = max(largest, len(members))
        if len(members) <= 1:
            continue
        index = {m: k for k, m in enumerate(members)}
        seen = [False] * len(members)
        comp_sizes = []
        for start in range(len(members)):
            if seen[start]:
                continue
            count = 0
            stack = [start]
            seen[start] = True
            while stack:
                k = stack.pop()
                count += 1
                flat = members[k]
                for delta in deltas:
                    out = list(flat)
                    ok = True
                    for pos, v in delta:
                        nv = out[pos] + v
                        if nv < 0:
                            ok = False
                            break
                        out[pos] = nv
                    if not ok:
                        continue
                    kn = index.get(tuple(out))
                    if kn is not None and not seen[kn]:
                        seen[kn] = True
                        stack.append(kn)
            comp_sizes.append(count)
        if len(comp_sizes) > 1:
            disconnected.append((key, tuple(sorted(comp_sizes))))

    return SweepReport(
        family=family,
        size=I,
        max_n=max_n,
        fibers_checked=len(fibers),
        tables_seen=tables_seen,
        largest_fiber=largest,
        disconnected=tuple(disconnected),
    )
