"""Graph Fourier transform: eigenbasis construction, forward/inverse
transforms, and spectral filtering."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EigensolveFailure
from .filters import SpectralFilter
from .graphs import VariationOperator

_TIE_TOL = 1e-8
_SIGN_TOL = 1e-8


@dataclass(frozen=True)
class SpectralBasis:
    """Orthonormal GFT basis: eigenvector columns and graph frequencies.

    For Laplacian eigenbases the frequencies are ascending. Constructed
    bases (the DFT basis, paired bipartite bases) keep their own
    documented index order instead.
    """

    vectors: np.ndarray
    lambdas: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.vectors)
        lam = np.asarray(self.lambdas, dtype=float)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] != len(lam):
            raise DimensionMismatch("basis must be square with one frequency per column")
        u = u.copy()
        lam = lam.copy()
        u.flags.writeable = False
        lam.flags.writeable = False
        object.__setattr__(self, "vectors", u)
        object.__setattr__(self, "lambdas", lam)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]


def _fix_signs(u: np.ndarray) -> np.ndarray:
    """Flip each column so its first entry above threshold is positive."""
    out = u.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.nonzero(np.abs(col) > _SIGN_TOL)[0]
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def _order_ties(u: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Within groups of equal eigenvalues, order columns lexicographically
    by rounded entries so degenerate subspaces get a reproducible basis
    ordering."""
    out = u.copy()
    scale = max(1.0, np.abs(lam).max(initial=1.0))
    start = 0
    while start < len(lam):
        stop = start + 1
        while stop < len(lam) and lam[stop] - lam[start] <= _TIE_TOL * scale:
            stop += 1
        if stop - start > 1:
            block = out[:, start:stop]
            keys = np.round(block, 9)
            order = sorted(range(block.shape[1]), key=lambda j: tuple(keys[:, j]))
            out[:, start:stop] = block[:, order]
        start = stop
    return out


def eigendecompose(op: VariationOperator) -> SpectralBasis:
    """Eigendecompose a variation operator into an orthonormal GFT basis.

    Eigenvalues come out ascending; within a degenerate group the basis
    ordering is made deterministic by making each eigenvector's first
    nonzero entry positive and sorting on rounded entries.

    Raises
    ------
    EigensolveFailure
        If the symmetric eigensolver does not converge.
    """
    try:
        lam, u = np.linalg.eigh(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolveFailure(str(exc)) from exc
    u = _order_ties(_fix_signs(u), lam)
    return SpectralBasis(u, lam)


def dft_basis(n: int) -> SpectralBasis:
    """Unitary DFT basis in frequency-index order.

    Column i is exp(+2j*pi*i*m/n)/sqrt(n), so the forward transform
    equals the unitary DFT. The attached frequencies are the circulant
    Laplacian eigenvalues 2 - 2cos(2*pi*i/n), kept in index order (they
    are not monotone).
    """
    if n < 2:
        raise DimensionMismatch("need n >= 2")
    m = np.arange(n)
    u = np.exp(2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)
    lam = 2.0 - 2.0 * np.cos(2.0 * np.pi * m / n)
    return SpectralBasis(u, lam)


def gft(b: SpectralBasis, x: np.ndarray) -> np.ndarray:
    """Forward transform: xhat[i] = <u_i, x>."""
    x = np.asarray(x)
    if x.shape[0] != b.n:
        raise DimensionMismatch(f"signal length {x.shape[0]} != {b.n}")
    return b.vectors.conj().T @ x


def igft(b: SpectralBasis, xhat: np.ndarray) -> np.ndarray:
    """Inverse transform: x = U xhat."""
    xhat = np.asarray(xhat)
    if xhat.shape[0] != b.n:
        raise DimensionMismatch(f"spectrum length {xhat.shape[0]} != {b.n}")
    return b.vectors @ xhat


def apply_filter(b: SpectralBasis, f: SpectralFilter, x: np.ndarray) -> np.ndarray:
    """Spectral filtering: U diag(f) U* x."""
    if f.n != b.n:
        raise DimensionMismatch(f"filter length {f.n} != {b.n}")
    return igft(b, f.values * gft(b, x))
