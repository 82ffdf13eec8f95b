"""Tensor-product structure of a composite Hilbert space.

Basis convention: for local dimensions ``(d_0, ..., d_{N-1})`` the composite
index is ``n = sum_i n_i * prod_{j>i} d_j``, so site 0 varies slowest.  This is
the ordering produced by ``np.kron(A_0, np.kron(A_1, ...))``.

Sites are numbered from 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .linalg import as_matrix, kron_all


@dataclass(frozen=True)
class SpaceStructure:
    """Ordered local dimensions of ``H = H_0 (x) H_1 (x) ... (x) H_{N-1}``."""

    local_dims: tuple[int, ...]
    total_dim: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if not dims:
            raise DomainError("a space needs at least one site")
        if any(d < 1 for d in dims):
            raise DomainError(f"local dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "total_dim", math.prod(dims))

    @property
    def n_sites(self) -> int:
        return len(self.local_dims)

    def stride(self, site: int) -> int:
        """Step in the composite index when ``n_site`` increases by one."""
        return math.prod(self.local_dims[site + 1:])

    def check_site(self, site: int) -> int:
        if not 0 <= site < self.n_sites:
            raise DomainError(f"site {site} out of range for {self.n_sites} sites")
        return site


def _structure(s) -> SpaceStructure:
    return s if isinstance(s, SpaceStructure) else SpaceStructure(tuple(s))


@dataclass(frozen=True)
class OperatorOnSpace:
    matrix: np.ndarray
    structure: SpaceStructure

    def __post_init__(self):
        m = as_matrix(self.matrix)
        s = _structure(self.structure)
        if m.shape[0] != s.total_dim:
            raise DomainError(
                f"matrix dimension {m.shape[0]} does not match structure {s.local_dims}"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "structure", s)

    @property
    def dim(self) -> int:
        return self.structure.total_dim

    def with_matrix(self, matrix) -> OperatorOnSpace:
        return OperatorOnSpace(matrix, self.structure)


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    structure: SpaceStructure

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        s = _structure(self.structure)
        if v.shape[0] != s.total_dim:
            raise DomainError(
                f"state has {v.shape[0]} amplitudes, structure {s.local_dims} needs {s.total_dim}"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("state has non-finite amplitudes")
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "structure", s)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def local(cls, amplitudes) -> StateVector:
        """Single-site state whose space is spanned by its own amplitudes."""
        v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        return cls(v, SpaceStructure((v.shape[0],)))


def _environment_offsets(structure: SpaceStructure, site: int) -> np.ndarray:
    """Composite indices of all basis states with ``n_site = 0``.

    Enumerates every assignment of the other sites' indices.
    """
    dims = structure.local_dims
    stride = structure.stride(site)
    block = dims[site] * stride
    n_high = structure.total_dim // block
    high = np.arange(n_high) * block
    low = np.arange(stride)
    return (high[:, None] + low[None, :]).reshape(-1)


def partial_trace_keep(a: OperatorOnSpace, keep: int) -> np.ndarray:
    """Reduce ``a`` onto a single site by tracing out every other site.

    ``out[n, n'] = sum_m A[(n, m), (n', m)]`` where ``m`` runs over all basis
    indices of the remaining sites.  With one site the matrix is returned
    unchanged.
    """
    s = a.structure
    s.check_site(keep)
    d = s.local_dims[keep]
    stride = s.stride(keep)
    env = _environment_offsets(s, keep)
    m = a.matrix
    out = np.empty((d, d), dtype=np.complex128)
    for n in range(d):
        rows = env + n * stride
        for n2 in range(d):
            out[n, n2] = m[rows, env + n2 * stride].sum()
    return out


def embed_local(op, site: int, structure) -> OperatorOnSpace:
    """Pad a local operator with identities: ``1 (x) ... (x) op (x) ... (x) 1``."""
    s = _structure(structure)
    s.check_site(site)
    op = as_matrix(op)
    if op.shape[0] != s.local_dims[site]:
        raise DomainError(
            f"local operator has dimension {op.shape[0]}, site {site} has {s.local_dims[site]}"
        )
    factors = [op if i == site else np.eye(d) for i, d in enumerate(s.local_dims)]
    return OperatorOnSpace(kron_all(factors), s)


def product_state(locals_, structure=None) -> StateVector:
    """Disentangled state ``phi_0 (x) phi_1 (x) ...`` from local state vectors.

    Items may be :class:`StateVector` instances or plain amplitude sequences.
    If ``structure`` is given the local vectors must match its dimensions.
    """
    vecs = []
    for v in locals_:
        amps = v.amplitudes if isinstance(v, StateVector) else np.asarray(v, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] == 0:
            raise DomainError("each local state must be a non-empty 1-d amplitude vector")
        vecs.append(amps)
    if not vecs:
        raise DomainError("product_state needs at least one local state")
    dims = tuple(v.shape[0] for v in vecs)
    if structure is not None and _structure(structure).local_dims != dims:
        raise DomainError(
            f"local state dimensions {dims} do not match structure {_structure(structure).local_dims}"
        )
    out = vecs[0]
    for v in vecs[1:]:
        out = np.kron(out, v)
    return StateVector(out, SpaceStructure(dims))
