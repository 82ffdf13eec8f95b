"""Brute-force reference computations, independent of the library code paths."""
import itertools
import math

import numpy as np


def digits(n, dims):
    """Site indices of composite index n, site 0 slowest."""
    out = []
    for d in reversed(dims):
        out.append(n % d)
        n //= d
    return tuple(reversed(out))


def composite(idx, dims):
    n = 0
    for i, d in zip(idx, dims):
        n = n * d + i
    return n


def kron_loops(a, b):
    da, db = a.shape[0], b.shape[0]
    out = np.zeros((da * db, da * db), dtype=complex)
    for i, j, k, l in itertools.product(range(da), range(da), range(db), range(db)):
        out[i * db + k, j * db + l] = a[i, j] * b[k, l]
    return out


def partial_trace_brute(a, dims, keep):
    """Double sum over the full basis: keep the entries whose other digits match."""
    d = dims[keep]
    out = np.zeros((d, d), dtype=complex)
    dim = math.prod(dims)
    for r in range(dim):
        dr = digits(r, dims)
        for c in range(dim):
            dc = digits(c, dims)
            if all(dr[i] == dc[i] for i in range(len(dims)) if i != keep):
                out[dr[keep], dc[keep]] += a[r, c]
    return out


def counterpart_brute(a, dims):
    n = len(dims)
    tr = np.trace(a)
    out = np.ones((1, 1), dtype=complex)
    for i in range(n):
        out = kron_loops(out, partial_trace_brute(a, dims, i))
    return out / tr ** (n - 1)


def hs_norm_columns(a):
    """sqrt(sum_alpha ||A e_alpha||^2) over the standard basis."""
    return math.sqrt(sum(np.linalg.norm(a[:, k]) ** 2 for k in range(a.shape[1])))


def epsilon_brute(a, dims):
    return math.log(hs_norm_columns(a) / hs_norm_columns(counterpart_brute(a, dims)))


def ising2_energies(h, j):
    return np.array([-h + j / 2, -j / 2, -j / 2, h + j / 2])


def ising_chain_energies(n, h, j):
    """Diagonal of the open chain from spin values s_i = +-1/2, site 0 slowest."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        s = [0.5 if b == 0 else -0.5 for b in bits]
        out.append(-h * sum(s) + 2 * j * sum(s[i] * s[i + 1] for i in range(n - 1)))
    return np.array(out)


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, d):
    """Haar-ish unitary from a QR decomposition, independent of evolve_operator."""
    q, r = np.linalg.qr(random_complex(rng, (d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
