"""Vertex/frequency sampling equivalence on bipartite graphs.

For a bipartite graph with equal parts, keeping the first part of a
signal is the vertex-domain face of graph-frequency folding: the paired
eigenbasis built here aligns each low eigenvalue lambda <= 1 of the
normalized Laplacian with its mirror 2 - lambda at offset K = N/2, so the
reduced-graph GFT of the kept samples equals the energy-normalized folded
spectrum exactly.

The paired basis comes from one SVD of the normalized adjacency block:
B = Phi Sigma Psi^T gives eigenvectors [phi; psi]/sqrt(2) at 1 - sigma and
[phi; -psi]/sqrt(2) at 1 + sigma, while Phi is simultaneously an
eigenbasis of the Kron-reduced Laplacian I - B B^T. Both identities then
hold to machine precision by construction, degenerate eigenvalues
included.

The spectral decimation pair used for the bridge is energy-preserving
(scaled by 1/sqrt(M)); its inverse direction surfaces as a gain of M in
the vertex-domain reconstruction, which makes the vertex pipeline agree
exactly with the plain frequency-domain sampling/reconstruction chain.
"""

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .chebyshev import apply_chebyshev, chebyshev_fit
from .errors import (
    DimensionMismatch,
    NotBipartite,
    PairingFailure,
    UnequalParts,
)
from .filters import SpectralFilter, bandlimit, bandlimit_response, from_response
from .graphs import Graph, VariationOperator, kron_reduce, normalized_laplacian
from .recovery import RecoveryDesign, Strategy, design_subspace_unconstrained
from .sampling import SampledSpectrum, SamplingConfig, frequency_sample
from .spectral import SpectralBasis, apply_filter

_SIGN_TOL = 1e-8
_RESIDUAL_TOL = 1e-8
NORMALIZED_INTERVAL = (0.0, 2.0)


@dataclass(frozen=True)
class BipartiteSystem:
    """Paired spectral machinery for one bipartite graph.

    Vertices are internally permuted so the first part occupies indices
    0..N/2-1; ``perm`` maps internal positions to caller indices and every
    public operation accepts and returns signals in the caller's order.
    """

    graph: Graph
    perm: np.ndarray
    op_b: VariationOperator
    basis_b: SpectralBasis
    reduced_op: VariationOperator
    basis_reduced: SpectralBasis
    cfg: SamplingConfig

    @property
    def half(self) -> int:
        return self.cfg.k

    def to_internal(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.cfg.n:
            raise DimensionMismatch(f"signal length {x.shape[0]} != {self.cfg.n}")
        return x[self.perm]

    def to_caller(self, x_internal: np.ndarray) -> np.ndarray:
        out = np.empty_like(x_internal)
        out[self.perm] = x_internal
        return out


def build_system(g: Graph) -> BipartiteSystem:
    """Construct the paired eigenbasis and Kron-reduced basis for a
    bipartite graph with equal parts.

    Raises
    ------
    NotBipartite, UnequalParts
        If the graph carries no bipartition or its parts differ in size.
    PairingFailure
        If the constructed bases miss the sampling-identity residual
        (should not happen; exposed rather than assumed).
    """
    if g.bipartition is None:
        raise NotBipartite("graph carries no bipartition")
    v1, v2 = g.bipartition
    if len(v1) != len(v2):
        raise UnequalParts(f"parts have sizes {len(v1)} and {len(v2)}")
    half = len(v1)
    n = g.n
    perm = np.concatenate([np.sort(v1), np.sort(v2)])
    w_perm = g.weights[np.ix_(perm, perm)]
    g_perm = Graph(n, w_perm, bipartition=(np.arange(half), np.arange(half, n)))
    op_b = normalized_laplacian(g_perm)
    reduced_op = kron_reduce(op_b, np.arange(half))

    block = -op_b.matrix[:half, half:]
    phi, sigma, psi_t = np.linalg.svd(block)
    psi = psi_t.T
    for j in range(half):
        nz = np.nonzero(np.abs(phi[:, j]) > _SIGN_TOL)[0]
        if nz.size and phi[nz[0], j] < 0:
            phi[:, j] = -phi[:, j]
            psi[:, j] = -psi[:, j]
    # svd() sorts sigma descending, so 1 - sigma is already ascending.
    lam_low = 1.0 - sigma
    basis_reduced = SpectralBasis(phi, 1.0 - sigma**2)

    u_b = np.zeros((n, n))
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    u_b[:half, :half] = phi * inv_sqrt2
    u_b[half:, :half] = psi * inv_sqrt2
    u_b[:half, half:] = phi * inv_sqrt2
    u_b[half:, half:] = -psi * inv_sqrt2
    lambdas = np.concatenate([lam_low, 2.0 - lam_low])
    basis_b = SpectralBasis(u_b, lambdas)

    sys = BipartiteSystem(g, perm, op_b, basis_b, reduced_op, basis_reduced,
                          SamplingConfig(n, 2))
    diag_res = np.max(np.abs(phi.T @ reduced_op.matrix @ phi - np.diag(basis_reduced.lambdas)))
    if diag_res > _RESIDUAL_TOL or reduction_identity_residual(sys) > _RESIDUAL_TOL:
        raise PairingFailure("paired basis construction missed its residual bound")
    return sys


def reduction_identity_residual(sys: BipartiteSystem) -> float:
    """Max-norm residual of the vertex/frequency sampling identity:
    U_reduced (1/sqrt(M)) [I_K I_K] U_B^T against [I 0].

    The energy-preserving decimator is required here: with the plain fold
    the product is exactly sqrt(M) [I 0] for any orthonormal bases.
    """
    half = sys.half
    u_b = sys.basis_b.vectors
    folded = (u_b.T[:half, :] + u_b.T[half:, :]) / np.sqrt(2.0)
    product = sys.basis_reduced.vectors @ folded
    target = np.zeros((half, sys.cfg.n))
    target[:, :half] = np.eye(half)
    return float(np.max(np.abs(product - target)))


def verify_corollary1(sys: BipartiteSystem, s: SpectralFilter, x: np.ndarray) -> float:
    """Residual of filtered sampling equivalence: the reduced-basis view of
    energy-normalized frequency sampling must equal keeping the first part
    of the filtered signal. Returns max |difference|."""
    x_int = sys.to_internal(x)
    chat = frequency_sample(sys.basis_b, s, x_int, sys.cfg)
    lhs = sys.basis_reduced.vectors @ (chat.values / np.sqrt(sys.cfg.m))
    rhs = apply_filter(sys.basis_b, s, x_int)[: sys.half]
    return float(np.max(np.abs(lhs - rhs)))


def build_wprime(w: SpectralFilter, h: np.ndarray) -> SpectralFilter:
    """Merge a reconstruction filter with a length-N/2 correction into one
    diagonal response: out[i] = w[i] * h[i mod N/2]."""
    h = np.asarray(h, dtype=float)
    if w.n != 2 * h.shape[0]:
        raise DimensionMismatch("need len(w) == 2 * len(h)")
    return SpectralFilter(w.values * np.tile(h, 2))


def _mask_first_part(y: np.ndarray, half: int) -> np.ndarray:
    masked = np.zeros_like(y)
    masked[:half] = y[:half]
    return masked


def vertex_pipeline(sys: BipartiteSystem, g: SpectralFilter,
                    wprime: SpectralFilter, x: np.ndarray) -> np.ndarray:
    """Sample and reconstruct entirely in the vertex domain: filter by g,
    keep the first part, zero-pad, filter by wprime, times the sampling
    ratio M.

    The M gain makes this composition equal the frequency-domain chain
    (plain fold sampling followed by correct/upsample/filter
    reconstruction) exactly, for every pair of spectral filters.
    """
    x_int = sys.to_internal(x)
    y = apply_filter(sys.basis_b, g, x_int)
    out = sys.cfg.m * apply_filter(sys.basis_b, wprime, _mask_first_part(y, sys.half))
    return sys.to_caller(out)


def vertex_pipeline_chebyshev(sys: BipartiteSystem, g_resp: Callable[[float], float],
                              wprime_resp: Callable[[float], float], x: np.ndarray,
                              order: int) -> np.ndarray:
    """GFT-free variant of :func:`vertex_pipeline`: both filters are applied
    through order-``order`` Chebyshev recurrences on the normalized
    Laplacian (interval [0, 2]), so no eigendecomposition is touched."""
    cf_g = chebyshev_fit(g_resp, NORMALIZED_INTERVAL, order)
    cf_w = chebyshev_fit(wprime_resp, NORMALIZED_INTERVAL, order)
    x_int = sys.to_internal(x)
    y = apply_chebyshev(sys.op_b, cf_g, x_int, lambda_max=2.0)
    masked = _mask_first_part(y, sys.half)
    out = sys.cfg.m * apply_chebyshev(sys.op_b, cf_w, masked, lambda_max=2.0)
    return sys.to_caller(out)


def correction_response(sys: BipartiteSystem, h: np.ndarray) -> Callable[[float], float]:
    """Interpolate length-N/2 correction values into a function of the
    graph frequency, using the pairing lambda <-> 2 - lambda to fold upper
    frequencies onto the lower half."""
    h = np.asarray(h, dtype=float)
    lam_low = sys.basis_b.lambdas[: sys.half]
    order = np.argsort(lam_low)
    xs, ys = lam_low[order], h[order]

    def resp(lam: float) -> float:
        folded = min(lam, 2.0 - lam)
        return float(np.interp(folded, xs, ys))

    return resp


@dataclass(frozen=True)
class OneBranchResult:
    """Encoded half-spectrum plus the signal it came from and its decode."""

    encoded: SampledSpectrum
    original: np.ndarray
    decoded: np.ndarray
    design: RecoveryDesign


def one_branch_roundtrip(sys: BipartiteSystem, a_resp: Callable[[float], float],
                         d: np.ndarray, order: Optional[int] = None) -> OneBranchResult:
    """Compress a full-band signal through one bandlimited branch and
    decode it in the vertex domain.

    The signal is synthesized from length-N/2 coefficients ``d`` by
    zero-padding onto the first part and filtering with the combined
    reconstruction response; encoding keeps the bandlimited folded
    spectrum; decoding runs the vertex pipeline with the same combined
    response. With exact filters the round trip is lossless whenever the
    direct-sum condition holds; ``order`` switches sampling and decoding
    to Chebyshev-approximated filters.

    Raises
    ------
    DsConditionViolated
        If the bandlimited sampling filter and the generator fail the
        direct-sum condition.
    """
    d = np.asarray(d, dtype=float)
    half = sys.half
    if d.shape[0] != half:
        raise DimensionMismatch(f"expected {half} coefficients, got {d.shape[0]}")
    s = bandlimit(sys.basis_b, half)
    a = from_response(sys.basis_b, a_resp)
    design = design_subspace_unconstrained(s, a, sys.cfg, Strategy.DS)
    wprime = build_wprime(a, design.h)

    x_int = apply_filter(sys.basis_b, wprime, np.concatenate([d, np.zeros(half)]))

    if order is None:
        kept = apply_filter(sys.basis_b, s, x_int)[:half]
        decoded_int = sys.cfg.m * apply_filter(
            sys.basis_b, wprime, np.concatenate([kept, np.zeros(half)]))
    else:
        s_resp = bandlimit_response(sys.basis_b, half)
        wp_resp = correction_response(sys, design.h)

        def combined(lam: float, _a=a_resp, _h=wp_resp) -> float:
            return _a(lam) * _h(lam)

        cf_s = chebyshev_fit(s_resp, NORMALIZED_INTERVAL, order)
        cf_w = chebyshev_fit(combined, NORMALIZED_INTERVAL, order)
        kept = apply_chebyshev(sys.op_b, cf_s, x_int, lambda_max=2.0)[:half]
        decoded_int = sys.cfg.m * apply_chebyshev(
            sys.op_b, cf_w, np.concatenate([kept, np.zeros(half)]), lambda_max=2.0)

    encoded = SampledSpectrum(
        np.sqrt(sys.cfg.m) * (sys.basis_reduced.vectors.T @ kept), sys.cfg)
    return OneBranchResult(encoded, sys.to_caller(x_int), sys.to_caller(decoded_int), design)


def encode_payload(result: OneBranchResult, generator: str, params: dict) -> str:
    """Serialize a one-branch encoding: JSON header (N, K, generator
    descriptor) followed by one spectrum value per line."""
    header = json.dumps({"n": result.encoded.config.n, "k": result.encoded.config.k,
                         "generator": generator, "params": params})
    lines = [header] + [repr(float(v)) for v in result.encoded.values]
    return "\n".join(lines) + "\n"


def parse_payload(text: str):
    """Inverse of :func:`encode_payload`; returns (header dict, values)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = json.loads(lines[0])
    values = np.array([float(ln) for ln in lines[1:]])
    if len(values) != header["k"]:
        raise DimensionMismatch("payload length disagrees with header")
    return header, values
