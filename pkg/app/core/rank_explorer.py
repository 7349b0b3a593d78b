# File: app/core/rank_explorer.py

"""
Rank sequences (rank of s^M for M = 1, 2, ...), general vs particular
classification, eventual (quasi-)polynomial fits and coefficient-space
searches.

Generic rank sequences are Monte Carlo estimates: random integer initial
values almost surely avoid the coefficient cancellations that produce
particular sequences, and the maximum over a few trials is taken. The
sampler is seeded per coefficient tuple, so results do not depend on the
order in which workers finish.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from itertools import product

from sympy import Poly, Rational, Symbol
from sympy.polys.domains import QQ
from tqdm import tqdm

from app import settings
from app.core.bounds import bound_attaining_recurrence, power_bound_refined
from app.core.errors import BudgetExceeded, ComputationError, LengthMismatch
from app.core.poly_core import format_rational, to_rational
from app.core.rank_engine import rank_of_power, rank_of_terms, strict_root_counts
from app.core.sequence_core import LinRecSequence, Recurrence

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler()],
)
logger = logging.getLogger(__name__)

M_SYMBOL = Symbol("M")

GENERAL = "general"
PARTICULAR = "particular"
UNKNOWN = "unknown"
CLASSIFICATIONS = (GENERAL, PARTICULAR, UNKNOWN)


@dataclass(frozen=True)
class QuasiPolynomial:
    """
    One polynomial in M per residue class: components[i] applies to the M
    with (M - 1) % period == i, for every M >= onset.
    """

    period: int
    components: tuple
    onset: int

    def evaluate(self, M: int):
        value = self.components[(M - 1) % self.period].eval(M)
        return to_rational(value)

    @property
    def degree(self) -> int:
        return max(c.degree() if not c.is_zero else 0 for c in self.components)

    @property
    def leading_coefficient(self):
        """Leading coefficient of the highest-degree component (first such class)."""
        degree = self.degree
        for component in self.components:
            if component.degree() == degree:
                return to_rational(component.LC())
        return to_rational(0)

    def expression(self, index: int = 0):
        return self.components[index].as_expr()

    def matches(self, other_expr) -> bool:
        """True for a plain polynomial equal to the sympy expression `other_expr`."""
        if self.period != 1:
            return False
        return Poly(other_expr, M_SYMBOL, domain=QQ) == self.components[0]

    def __str__(self):
        if self.period == 1:
            return str(self.expression())
        parts = [str(c.as_expr()) for c in self.components]
        return f"period {self.period}: " + " | ".join(parts)


@dataclass
class RankProfile:
    seq: LinRecSequence
    mmax: int
    ranks: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    transients: list = field(default_factory=list)
    fitted: QuasiPolynomial = None
    classification: str = UNKNOWN

    def __post_init__(self):
        if len(self.ranks) != self.mmax:
            raise LengthMismatch(f"{len(self.ranks)} ranks for mmax={self.mmax}")

    def to_record(self) -> dict:
        return {
            "sequence": self.seq.to_literal() if self.seq is not None else None,
            "ranks": list(self.ranks),
            "bounds": list(self.bounds),
            "transients": list(self.transients),
            "polynomial": str(self.fitted) if self.fitted else None,
            "classification": self.classification,
        }


def _bounds_for(recurrence: Recurrence, mmax: int) -> list:
    r, k = strict_root_counts(recurrence)
    if r == 0:
        return [0] * mmax
    return [power_bound_refined(r, k, M) for M in range(1, mmax + 1)]


def rank_sequence(seq: LinRecSequence, mmax: int, guard: int = None) -> RankProfile:
    if mmax < 1:
        raise ValueError(f"mmax must be >= 1, got {mmax}")
    ranks, transients = [], []
    for M in range(1, mmax + 1):
        try:
            certificate = rank_of_power(seq, M, guard)
        except ComputationError as e:
            logger.error(f"Rank of {seq} ^ {M} failed: {e}")
            e.M = M
            raise
        ranks.append(certificate.rank)
        transients.append(certificate.transient)
    logger.info(f"Rank sequence of {seq}: {ranks}")
    return RankProfile(
        seq=seq,
        mmax=mmax,
        ranks=ranks,
        bounds=_bounds_for(seq.recurrence, mmax),
        transients=transients,
    )


def rank_sequence_of_terms(terms, mmax: int, guard: int = None) -> RankProfile:
    """
    Rank sequence of a finite term list (for example an OEIS b-file). The
    bounds use the recurrence recovered for M = 1.
    """
    if mmax < 1:
        raise ValueError(f"mmax must be >= 1, got {mmax}")
    terms = [to_rational(t) for t in terms]
    ranks, transients, recurrence = [], [], None
    for M in range(1, mmax + 1):
        try:
            certificate = rank_of_terms([t ** M for t in terms], guard)
        except ComputationError as e:
            logger.error(f"Rank of the {M}-th power of {len(terms)} terms failed: {e}")
            e.M = M
            raise
        if M == 1:
            recurrence = certificate.recurrence
        ranks.append(certificate.rank)
        transients.append(certificate.transient)
    return RankProfile(
        seq=None,
        mmax=mmax,
        ranks=ranks,
        bounds=_bounds_for(recurrence, mmax),
        transients=transients,
    )


def _sampler(recurrence: Recurrence, seed: int) -> random.Random:
    return random.Random(f"{seed}:{','.join(recurrence.as_strings())}")


def generic_rank_sequence(
    rec: Recurrence,
    mmax: int,
    trials: int = None,
    height: int = None,
    seed: int = None,
    guard: int = None,
) -> list:
    """
    Per M, the largest rank of s^M over `trials` random integer initial
    vectors with entries in [-height, height].
    """
    trials = settings.DEFAULT_TRIALS if trials is None else trials
    height = settings.DEFAULT_HEIGHT if height is None else height
    seed = settings.DEFAULT_SEED if seed is None else seed
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if height < 1:
        raise ValueError(f"height must be >= 1, got {height}")

    rng = _sampler(rec, seed)
    best = [0] * mmax
    for _ in range(trials):
        init = [0] * rec.order
        while rec.order and not any(init):
            init = [rng.randint(-height, height) for _ in range(rec.order)]
        profile = rank_sequence(LinRecSequence(rec, tuple(init)), mmax, guard)
        best = [max(a, b) for a, b in zip(best, profile.ranks)]
    return best


def classify(profile: RankProfile, generic: list) -> str:
    if len(generic) != len(profile.ranks):
        raise LengthMismatch(
            f"the profile has {len(profile.ranks)} ranks, the generic sequence {len(generic)}"
        )
    if list(profile.ranks) == list(generic):
        return GENERAL
    if any(a < b for a, b in zip(profile.ranks, generic)):
        if any(a > b for a, b in zip(profile.ranks, generic)):
            # the sampler missed the general sequence for some M
            logger.warning(f"ranks {profile.ranks} exceed the generic estimate {generic} somewhere")
        return PARTICULAR
    logger.warning(f"ranks {profile.ranks} exceed the generic estimate {generic}")
    return UNKNOWN


def _newton_polynomial(points) -> Poly:
    """
    Interpolating polynomial in M through equally spaced points (M_j, y_j),
    built from forward differences.
    """
    x0, y0 = points[0]
    step = points[1][0] - x0 if len(points) > 1 else 1
    differences = [y for _, y in points]
    leading = [y0]
    while len(differences) > 1:
        differences = [b - a for a, b in zip(differences, differences[1:])]
        leading.append(differences[0])

    t = Poly([Rational(1, step), Rational(-x0, step)], M_SYMBOL, domain=QQ)
    basis = Poly(1, M_SYMBOL, domain=QQ)
    result = Poly(0, M_SYMBOL, domain=QQ)
    for i, delta in enumerate(leading):
        if i:
            basis = basis * (t - (i - 1)) * Rational(1, i)
        result = result + basis * Rational(delta)
    return result


def _fit_class(points, window: int, max_degree: int):
    """Lowest-degree polynomial that reproduces a long enough tail of `points`."""
    for degree in range(max_degree + 1):
        if len(points) < degree + 2:
            return None
        candidate = _newton_polynomial(points[-(degree + 1):])
        tail = max(min(window, len(points)), degree + 2)
        if all(candidate.eval(m) == y for m, y in points[-tail:]):
            return candidate
    return None


def fit_quasi_polynomial(
    ranks, max_period: int = 4, window: int = 3, max_degree: int = 4
) -> QuasiPolynomial:
    """
    Smallest period p (up to `max_period`) for which every residue class of
    M mod p is eventually polynomial. Returns None when nothing fits.
    """
    ranks = [int(r) for r in ranks]
    for period in range(1, max_period + 1):
        components = []
        for residue in range(period):
            points = [(M, ranks[M - 1]) for M in range(1, len(ranks) + 1) if (M - 1) % period == residue]
            component = _fit_class(points, window, max_degree)
            if component is None:
                break
            components.append(component)
        else:
            onset = len(ranks) + 1
            for M in range(len(ranks), 0, -1):
                if components[(M - 1) % period].eval(M) != ranks[M - 1]:
                    break
                onset = M
            fit = QuasiPolynomial(period=period, components=tuple(components), onset=onset)
            logger.info(f"Fitted {fit} from M={onset} to {ranks}")
            return fit
    logger.info(f"No quasi-polynomial fit for {ranks}")
    return None


def probe_eventual_polynomial(profile: RankProfile) -> dict:
    """
    Checks that a general rank sequence fits a plain polynomial and a
    particular one a quasi-polynomial. Reported, never raised.
    """
    fit = profile.fitted or fit_quasi_polynomial(profile.ranks)
    if profile.classification == GENERAL:
        consistent = fit is not None and fit.period == 1
    elif profile.classification == PARTICULAR:
        consistent = fit is not None
    else:
        consistent = None
    if consistent is False:
        logger.warning(f"{profile.classification} ranks {profile.ranks} do not fit the expected shape (fit: {fit})")
    return {
        "ranks": list(profile.ranks),
        "classification": profile.classification,
        "polynomial": str(fit) if fit else None,
        "consistent": consistent,
    }


@dataclass(frozen=True)
class SearchFilters:
    distinct_roots: int = None
    bound_attaining_only: bool = False
    classification: str = None

    def __post_init__(self):
        if self.classification is not None and self.classification not in CLASSIFICATIONS:
            raise ValueError(f"unknown classification {self.classification!r}")


@dataclass
class SearchRow:
    coeffs: tuple
    ranks: list
    distinct_roots: int
    bound_attaining: bool
    classification: str = GENERAL
    fitted: QuasiPolynomial = None
    init: tuple = None

    def sort_key(self):
        if self.fitted is None:
            return (1, 0, 0, self.coeffs)
        return (0, self.fitted.degree, self.fitted.leading_coefficient, self.coeffs)

    def to_record(self) -> dict:
        return {
            "coefficients": [format_rational(c) for c in self.coeffs],
            "init": [format_rational(t) for t in self.init] if self.init else None,
            "ranks": list(self.ranks),
            "polynomial": str(self.fitted) if self.fitted else None,
            "classification": self.classification,
            "distinct_roots": self.distinct_roots,
            "bound_attaining": self.bound_attaining,
        }


def _search_task(task):
    """Worker entry point; `task` holds plain data only so it pickles."""
    coeffs, mmax, trials, height, seed, guard, init_vectors = task
    recurrence = Recurrence(coeffs)
    generic = generic_rank_sequence(recurrence, mmax, trials, height, seed, guard)
    particular = []
    for init in init_vectors:
        profile = rank_sequence(LinRecSequence(recurrence, init), mmax, guard)
        if classify(profile, generic) == PARTICULAR:
            particular.append((init, profile.ranks))
    return coeffs, generic, particular


def _coefficient_tuples(rank: int, coeff_range):
    low, high = coeff_range
    if low > high:
        raise ValueError(f"empty coefficient range [{low}, {high}]")
    for coeffs in product(range(low, high + 1), repeat=rank):
        if coeffs[-1] != 0:
            yield coeffs


def _init_vectors(rank: int, init_range):
    if init_range is None:
        return []
    low, high = init_range
    if low > high:
        raise ValueError(f"empty initial-value range [{low}, {high}]")
    return [v for v in product(range(low, high + 1), repeat=rank) if any(v)]


def search(
    rank: int,
    coeff_range,
    init_range=None,
    mmax: int = None,
    filters: SearchFilters = None,
    trials: int = None,
    height: int = None,
    seed: int = None,
    guard: int = None,
    budget: int = None,
    workers: int = None,
    include_bound_rows: bool = False,
    extra_coeffs=(),
    progress: bool = False,
) -> list:
    """
    Distinct rank sequences over the integer recurrences of order `rank`
    with coefficients in `coeff_range` (c_0 != 0). Rows are deduplicated by
    their rank-sequence prefix, keeping the lexicographically first
    coefficient tuple, and sorted by (fitted degree, leading coefficient,
    coefficients).
    """
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    mmax = settings.DEFAULT_MMAX if mmax is None else mmax
    trials = settings.DEFAULT_TRIALS if trials is None else trials
    budget = settings.DEFAULT_BUDGET if budget is None else budget
    seed = settings.DEFAULT_SEED if seed is None else seed
    filters = filters or SearchFilters()

    tuples = list(_coefficient_tuples(rank, coeff_range))
    for coeffs in extra_coeffs:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != rank:
            raise LengthMismatch(f"extra row {coeffs} does not have {rank} coefficients")
        if coeffs[-1] == 0:
            raise ValueError(f"extra row {coeffs}: c0 must be nonzero")
        if coeffs not in tuples:
            tuples.append(coeffs)
    if include_bound_rows:
        for k in range(1, rank + 1):
            coeffs = tuple(int(QQ.numer(c)) for c in bound_attaining_recurrence(rank, k).coeffs)
            if coeffs not in tuples:
                tuples.append(coeffs)
    tuples.sort()

    init_vectors = _init_vectors(rank, init_range)
    cost = len(tuples) * mmax * (trials + len(init_vectors))
    if cost > budget:
        raise BudgetExceeded(f"the search needs {cost} rank computations, the budget is {budget}")
    logger.info(f"Searching {len(tuples)} recurrences of rank {rank} ({cost} rank computations)")

    tasks = [(coeffs, mmax, trials, height, seed, guard, init_vectors) for coeffs in tuples]
    results = {}
    count = settings.worker_count(workers)
    try:
        if count == 1:
            for task in tqdm(tasks, desc="search", disable=not progress):
                coeffs, generic, particular = _search_task(task)
                results[coeffs] = (generic, particular)
        else:
            with ProcessPoolExecutor(max_workers=count) as executor:
                futures = {executor.submit(_search_task, task): task[0] for task in tasks}
                for future in tqdm(as_completed(futures), total=len(futures), desc="search", disable=not progress):
                    coeffs, generic, particular = future.result()
                    results[coeffs] = (generic, particular)
    except Exception as e:
        logger.error(f"Search over rank {rank} failed: {e}")
        raise

    rows = {}
    for coeffs in tuples:
        generic, particular = results[coeffs]
        recurrence = Recurrence(coeffs)
        _, k = strict_root_counts(recurrence)
        bounds = _bounds_for(recurrence, mmax)
        candidates = [(None, generic, GENERAL)] + [(init, ranks, PARTICULAR) for init, ranks in particular]
        for init, ranks, classification in candidates:
            key = (tuple(ranks), classification)
            if key in rows:
                continue
            rows[key] = SearchRow(
                coeffs=coeffs,
                ranks=list(ranks),
                distinct_roots=k,
                bound_attaining=list(ranks) == bounds,
                classification=classification,
                init=init,
            )

    selected = []
    for row in rows.values():
        if filters.distinct_roots is not None and row.distinct_roots != filters.distinct_roots:
            continue
        if filters.bound_attaining_only and not row.bound_attaining:
            continue
        if filters.classification is not None and row.classification != filters.classification:
            continue
        row.fitted = fit_quasi_polynomial(row.ranks)
        selected.append(row)
    selected.sort(key=SearchRow.sort_key)
    logger.info(f"Search over rank {rank} found {len(selected)} rows")
    return selected
