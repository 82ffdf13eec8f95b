"""Entanglement production by operators.

The measure compares an operator ``A`` with its non-entangling counterpart,
the normalized product of its single-site reductions::

    A_ne = (A_0 (x) A_1 (x) ... (x) A_{N-1}) / Tr(A)**(N-1)
    eps(A) = log(||A||_p / ||A_ne||_p)

Evolution operators ``exp(-iHt)`` and Gibbs operators ``exp(-beta H)/Z`` are the
two families treated specially here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalInstability, TracelessOperator
from .linalg import (
    INF,
    EigenSystem,
    evolve_operator,
    hermitian_eig,
    hilbert_schmidt_norm,
    imaginary_time_operator,
    kron_all,
    schatten_norm,
)
from .space import OperatorOnSpace, StateVector, partial_trace_keep

TRACE_TOL = 1e-12
MU_TIMES = (1e-2, 5e-3, 2.5e-3)
MU_RTOL = 1e-4
# noise floor of 2*eps/t**2 at the smallest extrapolation time
MU_ATOL = 1e-9

_LOG_BASES = {"e": 1.0, "2": math.log(2.0), "10": math.log(10.0)}


def normalize_log_base(base) -> str:
    """Canonical name (``"e"``, ``"2"`` or ``"10"``) of a logarithm base."""
    if isinstance(base, str):
        key = base.strip().lower()
        if key in ("e", "natural", "ln"):
            return "e"
        if key in _LOG_BASES:
            return key
    elif base == math.e:
        return "e"
    elif base in (2, 10):
        return str(int(base))
    raise DomainError(f"unsupported logarithm base {base!r}; use 'e', 2 or 10")


def log_in_base(x: float, base="e") -> float:
    return math.log(x) / _LOG_BASES[normalize_log_base(base)]


@dataclass(frozen=True)
class MeasureResult:
    epsilon: float
    norm_numerator: float
    norm_denominator: float
    p: float = 2.0
    log_base: str = "e"


@dataclass(frozen=True)
class ThermalResult:
    epsilon: float
    beta: float
    partition_function: float
    route: str
    log_base: str = "e"


def _check_trace(a: OperatorOnSpace, t: float | None = None) -> complex:
    tr = complex(np.trace(a.matrix))
    norm = hilbert_schmidt_norm(a.matrix)
    if not abs(tr) > TRACE_TOL * norm:
        raise TracelessOperator(tr, norm, t)
    return tr


def nonentangling_counterpart(a: OperatorOnSpace) -> OperatorOnSpace:
    """Product of single-site reductions, rescaled to keep ``Tr`` unchanged.

    Raises :class:`TracelessOperator` if ``|Tr A| <= 1e-12 ||A||_2``.
    """
    tr = _check_trace(a)
    n = a.structure.n_sites
    reduced = [partial_trace_keep(a, i) for i in range(n)]
    return a.with_matrix(kron_all(reduced) / tr ** (n - 1))


def entanglement_production(a: OperatorOnSpace, p: float = 2, log_base="e") -> MeasureResult:
    """Entanglement-production measure ``log(||A||_p / ||A_ne||_p)`` of ``a``.

    Parameters
    ----------
    a : OperatorOnSpace
        Operator with non-vanishing trace.
    p : float
        Schatten index, ``p >= 1`` or ``math.inf``.
    log_base : {"e", 2, 10}
        Base of the logarithm.

    Returns
    -------
    MeasureResult
    """
    base = normalize_log_base(log_base)
    num = schatten_norm(a.matrix, p)
    den = schatten_norm(nonentangling_counterpart(a).matrix, p)
    return MeasureResult(log_in_base(num / den, base), num, den, float(p), base)


def evolutional_measure(
    h: OperatorOnSpace,
    t: float,
    p: float = 2,
    log_base="e",
    eig: EigenSystem | None = None,
) -> MeasureResult:
    """Entanglement production of the evolution operator ``exp(-i h t)``.

    All singular values of a unitary equal one, so ``||U||_p = dim**(1/p)`` is
    used for the numerator instead of an SVD.  ``eig`` may carry a precomputed
    decomposition of ``h`` for sweeps over many times.
    """
    base = normalize_log_base(log_base)
    if eig is None:
        eig = hermitian_eig(h.matrix)
    u = h.with_matrix(evolve_operator(eig, t))
    dim = h.dim
    num = 1.0 if p == INF else dim ** (1.0 / p)
    if p == 2:
        assert abs(hilbert_schmidt_norm(u.matrix) - num) <= 1e-10 * num
    try:
        counterpart = nonentangling_counterpart(u)
    except TracelessOperator as exc:
        raise TracelessOperator(exc.trace, exc.norm, t) from None
    den = schatten_norm(counterpart.matrix, p)
    return MeasureResult(log_in_base(num / den, base), num, den, float(p), base)


def richardson_even(values, ratio: float = 2.0) -> tuple[float, float]:
    """Extrapolate ``f(t) = f0 + c2 t**2 + c4 t**4 + ...`` to ``t = 0``.

    ``values`` holds ``f`` at ``t, t/ratio, t/ratio**2, ...``.  Returns the
    final extrapolated value and the last value of the previous tableau level,
    whose difference measures convergence.
    """
    level = [float(v) for v in values]
    if len(level) < 2:
        raise DomainError("Richardson extrapolation needs at least two samples")
    order = 2
    previous = level[-1]
    while len(level) > 1:
        previous = level[-1]
        k = ratio ** order
        level = [(k * fine - coarse) / (k - 1) for coarse, fine in zip(level, level[1:])]
        order += 2
    return level[0], previous


def short_time_mu(h: OperatorOnSpace, times=MU_TIMES) -> float:
    """Coefficient ``mu`` of the short-time law ``eps(t) ~ mu t**2 / 2``.

    Estimated as the limit of ``2 eps(t) / t**2`` (natural log) by Richardson
    extrapolation over ``times``, which must halve successively.  Raises
    :class:`NumericalInstability` if the last two tableau levels differ by
    more than ``1e-4`` relative.
    """
    eig = hermitian_eig(h.matrix)
    samples = [2.0 * evolutional_measure(h, t, eig=eig).epsilon / t**2 for t in times]
    mu, previous = richardson_even(samples, ratio=times[0] / times[1])
    spread = abs(mu - previous)
    if spread > MU_RTOL * abs(mu) + MU_ATOL:
        raise NumericalInstability(
            f"short-time extrapolation did not converge: estimate {mu!r}, spread {spread:.3e}"
        )
    return mu


def entanglement_probability(a: OperatorOnSpace, phi_dis: StateVector, phi_ent: StateVector) -> float:
    """Normalized transition probability ``|<ent| A |dis>|**2``.

    Normalized by ``||phi_ent||**2 ||A phi_dis||**2`` so that the value lies
    in ``[0, 1]``.
    """
    for phi in (phi_dis, phi_ent):
        if phi.structure != a.structure:
            raise DomainError(
                f"state structure {phi.structure.local_dims} does not match operator "
                f"structure {a.structure.local_dims}"
            )
    image = a.matrix @ phi_dis.amplitudes
    n_image = float(np.vdot(image, image).real)
    n_ent = float(np.vdot(phi_ent.amplitudes, phi_ent.amplitudes).real)
    if n_image == 0.0 or n_ent == 0.0:
        raise DomainError("entanglement probability is undefined for zero-norm states")
    overlap = np.vdot(phi_ent.amplitudes, image)
    return min(1.0, float(abs(overlap) ** 2 / (n_ent * n_image)))


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not beta >= 0:
        raise DomainError(f"inverse temperature must be >= 0, got {beta}")
    return beta


def thermal_measure_direct(h: OperatorOnSpace, beta: float, log_base="e") -> ThermalResult:
    """Thermal entanglement production from the Gibbs operator itself.

    Builds ``rho = exp(-beta H) / Z``, its single-site marginals ``rho_i`` and
    compares ``||rho||_2`` with ``||rho_0 (x) rho_1 (x) ...||_2``.
    """
    beta = _check_beta(beta)
    base = normalize_log_base(log_base)
    eig = hermitian_eig(h.matrix)
    w = eig.eigenvalues
    shift = w[0] if beta > 0 else 0.0
    weights = np.exp(-beta * (w - shift))
    total = float(weights.sum())
    z = math.exp(-beta * shift) * total
    v = eig.eigenvectors
    rho = h.with_matrix((v * (weights / total)) @ v.conj().T)
    marginals = [partial_trace_keep(rho, i) for i in range(h.structure.n_sites)]
    num = schatten_norm(rho.matrix, 2)
    den = schatten_norm(kron_all(marginals), 2)
    return ThermalResult(log_in_base(num / den, base), beta, z, "direct", base)


def thermal_measure_partition(h: OperatorOnSpace, beta: float, log_base="e") -> ThermalResult:
    """Thermal entanglement production through imaginary-time evolution.

    Uses only ``U(-i beta) = exp(-beta H)``, ``U(-2i beta)``, single-site
    partial traces and traces::

        eps = 1/2 log[ Z**(2N-2) Tr U(-2i beta) / prod_i Tr_i (Tr_{not i} U(-i beta))**2 ]

    The bracket is evaluated as a sum of logarithms, which avoids overflow of
    ``Z**(2N-2)`` at large ``beta``.
    """
    beta = _check_beta(beta)
    base = normalize_log_base(log_base)
    eig = hermitian_eig(h.matrix)
    u1 = h.with_matrix(imaginary_time_operator(eig, beta))
    u2 = imaginary_time_operator(eig, 2.0 * beta)
    n = h.structure.n_sites
    z = float(np.trace(u1.matrix).real)
    log_ratio = (2 * n - 2) * math.log(z) + math.log(float(np.trace(u2).real))
    for i in range(n):
        x = partial_trace_keep(u1, i)
        log_ratio -= math.log(float(np.trace(x @ x).real))
    return ThermalResult(0.5 * log_ratio / _LOG_BASES[base], beta, z, "partition_formula", base)
