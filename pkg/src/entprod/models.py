"""Model Hamiltonians, closed-form references and random operators.

The two-qubit Ising register is

    H = -h (Sz (x) 1 + 1 (x) Sz) + 2J Sz (x) Sz,    Sz = diag(1/2, -1/2),

diagonal in the basis (uu, ud, du, dd) with energies
(-h + J/2, -J/2, -J/2, h + J/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, TracelessOperator
from .linalg import evolve_operator, hermitian_eig, imaginary_time_operator
from .measure import TRACE_TOL, evolutional_measure, log_in_base, richardson_even
from .space import OperatorOnSpace, SpaceStructure, embed_local

SZ = np.diag([0.5, -0.5]).astype(np.complex128)

PERIOD_RTOL = 1e-9
MAX_DENOMINATOR = 1000
PERIOD_CHECK_TOL = 1e-9
PERIOD_CHECK_POINTS = 1000
MAX_CHAIN_SITES = 12

QUARTIC_TIMES = (0.1, 0.05, 0.025)


@dataclass(frozen=True)
class Ising2Params:
    h: float
    j: float

    def __post_init__(self):
        if not (math.isfinite(self.h) and math.isfinite(self.j)):
            raise DomainError(f"Ising parameters must be finite, got h={self.h}, J={self.j}")


@dataclass(frozen=True)
class PeriodClass:
    """Temporal structure of the two-qubit measure.

    ``kind`` is ``"periodic"``, ``"quasi_periodic"`` or ``"degenerate"``
    (``J = 0``, where the measure vanishes identically).  ``period`` is in
    units of ``1/J`` and ``p_over_q`` is the reduced ratio ``h/J``; both are
    ``None`` unless periodic.
    """

    kind: str
    period: float | None = None
    p_over_q: tuple[int, int] | None = None


def ising2_hamiltonian(params: Ising2Params) -> OperatorOnSpace:
    s = SpaceStructure((2, 2))
    free = embed_local(SZ, 0, s).matrix + embed_local(SZ, 1, s).matrix
    coupling = np.kron(SZ, SZ)
    return OperatorOnSpace(-params.h * free + 2.0 * params.j * coupling, s)


def ising_chain_hamiltonian(n: int, h: float, j: float) -> OperatorOnSpace:
    """Open Ising chain ``-h sum_i Sz_i + 2J sum_i Sz_i Sz_{i+1}`` on ``n`` qubits."""
    if not 2 <= n <= MAX_CHAIN_SITES:
        raise DomainError(f"chain length must be in [2, {MAX_CHAIN_SITES}], got {n}")
    s = SpaceStructure((2,) * n)
    sz = [embed_local(SZ, i, s).matrix for i in range(n)]
    m = -h * sum(sz)
    for i in range(n - 1):
        m = m + 2.0 * j * (sz[i] @ sz[i + 1])
    return OperatorOnSpace(m, s)


def _closed_form_terms(h, j, t):
    ch = np.cos(np.multiply(h, t))
    sj = np.sin(np.multiply(j, t))
    den = 1.0 + ch * np.cos(np.multiply(j, t))
    return ch, sj, den


def ising2_measure_closed_form(params: Ising2Params, t: float, log_base="e") -> float:
    """Exact measure of the two-qubit Ising evolution operator.

    ``eps(t) = 1/2 log[(1 + cos^2(ht) + 2 cos(ht) cos(Jt)) / (1 + cos(ht) cos(Jt))^2]``.

    The argument of the logarithm equals
    ``1 + (cos(ht) sin(Jt) / (1 + cos(ht) cos(Jt)))**2``, which is evaluated
    with ``log1p`` so that small values keep full relative precision.
    """
    ch, sj, den = _closed_form_terms(params.h, params.j, t)
    if abs(den) <= TRACE_TOL:
        raise TracelessOperator(0j, 2.0, t)
    eps = 0.5 * math.log1p((ch * sj / den) ** 2)
    return eps * log_in_base(math.e, log_base)


def ising2_closed_form_grid(params: Ising2Params, times) -> np.ndarray:
    """Vectorized closed form (natural log); NaN where the denominator vanishes."""
    ch, sj, den = _closed_form_terms(params.h, params.j, np.asarray(times, dtype=float))
    bad = np.abs(den) <= TRACE_TOL
    safe = np.where(bad, 1.0, den)
    return np.where(bad, np.nan, 0.5 * np.log1p((ch * sj / safe) ** 2))


def ising2_short_time(params: Ising2Params, t: float) -> float:
    """Fourth-order short-time expansion of the two-qubit measure (natural log)."""
    h, j = params.h, params.j
    return j * j * t * t / 8.0 + j * j * (j * j - 12.0 * h * h) * t**4 / 192.0


def ising2_quartic_coefficient(params: Ising2Params, numeric: bool = False) -> float:
    """Extrapolate ``(eps(t) - J^2 t^2 / 8) / t^4`` to ``t -> 0``.

    Sample times are ``QUARTIC_TIMES`` scaled by ``1/max(|h|, |J|)``.  With
    ``numeric=True`` the measure comes from the full matrix pipeline instead
    of the closed form.
    """
    omega = max(abs(params.h), abs(params.j))
    if omega == 0:
        return 0.0
    times = [tau / omega for tau in QUARTIC_TIMES]
    if numeric:
        ham = ising2_hamiltonian(params)
        eig = hermitian_eig(ham.matrix)
        eps = [evolutional_measure(ham, t, eig=eig).epsilon for t in times]
    else:
        eps = [ising2_measure_closed_form(params, t) for t in times]
    lead = params.j**2 / 8.0
    samples = [(e - lead * t * t) / t**4 for e, t in zip(eps, times)]
    return richardson_even(samples)[0]


def classify_periodicity(
    params: Ising2Params,
    rational_tolerance: float = PERIOD_RTOL,
    max_denominator: int = MAX_DENOMINATOR,
) -> PeriodClass:
    """Periodic or quasi-periodic classification of the two-qubit measure.

    ``h/J`` is matched to a reduced fraction ``p/q`` with ``q <= max_denominator``
    by continued fractions.  A rational ratio gives the period ``q pi`` (units
    ``1/J``) when ``p`` and ``q`` have equal parity and ``2 q pi`` otherwise:
    shifting ``Jt`` by ``q pi`` flips the signs of ``cos(ht)`` and ``cos(Jt)`` by
    ``(-1)**p`` and ``(-1)**q``, and the measure depends on them only through
    ``cos(ht)**2``, ``sin(Jt)**2`` and the product ``cos(ht) cos(Jt)``.
    """
    if params.j == 0:
        return PeriodClass("degenerate")
    ratio = params.h / params.j
    frac = Fraction(ratio).limit_denominator(max_denominator)
    if abs(float(frac) - ratio) > rational_tolerance * max(1.0, abs(ratio)):
        return PeriodClass("quasi_periodic")
    p, q = frac.numerator, frac.denominator
    period = q * math.pi if (p - q) % 2 == 0 else 2 * q * math.pi
    return PeriodClass("periodic", period, (p, q))


def _unit_params(params: Ising2Params) -> Ising2Params:
    return Ising2Params(params.h / params.j, 1.0)


def period_holds(
    params: Ising2Params,
    period: float,
    points: int = PERIOD_CHECK_POINTS,
    tol: float = PERIOD_CHECK_TOL,
) -> bool:
    """Grid check ``|eps(t + T) - eps(t)| < tol`` with ``T`` in units of ``1/J``.

    The grid has ``points`` midpoints covering ``[0, max(T, 8 pi))``.  Points
    where either value is undefined are skipped.
    """
    unit = _unit_params(params)
    span = max(period, 8 * math.pi)
    t = (np.arange(points) + 0.5) * (span / points)
    a = ising2_closed_form_grid(unit, t)
    b = ising2_closed_form_grid(unit, t + period)
    ok = ~(np.isnan(a) | np.isnan(b))
    return bool(np.all(np.abs(a[ok] - b[ok]) < tol))


def _primes_up_to(n: int) -> list[int]:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, int(n**0.5) + 1):
        if sieve[k]:
            sieve[k * k::k] = False
    return [int(k) for k in np.flatnonzero(sieve)]


def period_is_minimal(params: Ising2Params, period: float, max_divisor: int = 1000) -> bool:
    """True if no ``T/k`` with integer ``2 <= k <= max_divisor`` is also a period.

    Any integer multiple of a period is a period, so if ``T/k`` passes then
    ``T/p`` passes for each prime ``p`` dividing ``k``; checking primes suffices.
    """
    return not any(period_holds(params, period / k) for k in _primes_up_to(max_divisor))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


RANDOM_KINDS = ("hermitian", "hermitian_exponential", "unitary", "generic", "thermal_state")


def random_operator(structure, kind: str, seed: int) -> OperatorOnSpace:
    """Seeded random operator for property tests.

    kinds
        ``hermitian``: ``(G + G^+)/2`` with complex Gaussian ``G``.
        ``hermitian_exponential``: ``exp(-H)`` for such an ``H``.
        ``unitary``: ``exp(-iH)``.
        ``generic``: complex Gaussian matrix, redrawn until ``|Tr| > 0.1 ||.||_2``.
        ``thermal_state``: ``exp(-H) / Tr exp(-H)``.
    """
    s = structure if isinstance(structure, SpaceStructure) else SpaceStructure(tuple(structure))
    rng = np.random.default_rng(seed)
    d = s.total_dim
    if kind == "generic":
        while True:
            m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            if abs(np.trace(m)) > 0.1 * np.linalg.norm(m):
                return OperatorOnSpace(m, s)
    if kind not in RANDOM_KINDS:
        raise DomainError(f"unknown random operator kind {kind!r}")
    h = random_hermitian(d, rng)
    if kind == "hermitian":
        m = h
    elif kind == "unitary":
        m = evolve_operator(h, 1.0)
    else:
        m = imaginary_time_operator(h, 1.0)
        if kind == "thermal_state":
            m = m / np.trace(m).real
    return OperatorOnSpace(m, s)
