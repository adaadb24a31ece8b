"""Correction and reconstruction filter designs for sampled graph signals.

Signals are modeled either by a periodic-graph-spectrum (PGS) subspace --
a K-periodic coefficient spectrum shaped by a known generator response --
or by a smoothness bound on a quadratic form. Every design below comes out
as a length-K diagonal correction filter paired with a length-N diagonal
reconstruction filter; the denominators are folded cross-correlations of
the filters involved.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    DsConditionViolated,
    InvalidParameter,
    SingularCorrelation,
    ZeroReference,
)
from .filters import SpectralFilter
from .sampling import (
    SampledSpectrum,
    SamplingConfig,
    sampled_cross_correlation,
    spectral_upsample,
)
from .spectral import SpectralBasis, gft, igft

MSE_FLOOR_DB = -320.0


class Strategy(Enum):
    DS = "ds"
    LS = "ls"
    MX = "mx"


class Mode(Enum):
    UNCONSTRAINED = "unconstrained"
    PREDEFINED = "predefined"


@dataclass(frozen=True)
class SubspacePrior:
    """The signal lies in the PGS subspace of a known generator."""

    generator: SpectralFilter


@dataclass(frozen=True)
class SmoothnessPrior:
    """The signal satisfies a quadratic smoothness bound.

    The weighting response must be nonzero everywhere; the bound ``rho``
    is carried as metadata only (no design formula uses it).
    """

    v: SpectralFilter
    rho: Optional[float] = None

    def __post_init__(self):
        if np.any(self.v.values == 0):
            raise InvalidParameter("smoothness weighting must be nonzero everywhere")


@dataclass(frozen=True)
class PgsModel:
    """Generator response, sampling configuration, and GFT basis defining
    a periodic-graph-spectrum subspace."""

    generator: SpectralFilter
    cfg: SamplingConfig
    basis: SpectralBasis

    def __post_init__(self):
        if self.generator.n != self.cfg.n or self.basis.n != self.cfg.n:
            raise DimensionMismatch("generator, basis, and config sizes must agree")


@dataclass(frozen=True)
class RecoveryDesign:
    """Correction filter (K diagonal values) plus reconstruction filter
    (length N) and the strategy/mode that produced them."""

    h: np.ndarray
    w: SpectralFilter
    strategy: Strategy
    mode: Mode

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if not np.all(np.isfinite(h)):
            raise InvalidParameter("correction values must be finite")
        h.flags.writeable = False
        object.__setattr__(self, "h", h)

    def to_record(self) -> str:
        """Structured one-line JSON for audit."""
        return json.dumps({
            "strategy": self.strategy.value,
            "mode": self.mode.value,
            "h": [float(v) for v in self.h],
            "w": [float(v) for v in self.w.values],
        })


@dataclass(frozen=True)
class DsCheck:
    holds: bool
    min_abs: float


def _tol(corr: np.ndarray, tol: Optional[float]) -> float:
    # Scale-relative pseudo-inverse cutoff.
    return 1e-10 * np.abs(corr).max(initial=0.0) if tol is None else tol


def generate_pgs(model: PgsModel, dhat: np.ndarray) -> np.ndarray:
    """Synthesize a PGS signal from length-K expansion coefficients:
    x = U diag(generator) upsample(dhat)."""
    dhat = np.asarray(dhat)
    if dhat.shape[0] != model.cfg.k:
        raise DimensionMismatch(f"expected {model.cfg.k} coefficients, got {dhat.shape[0]}")
    return igft(model.basis, model.generator.values * spectral_upsample(dhat, model.cfg))


def check_ds(s: SpectralFilter, a: SpectralFilter, cfg: SamplingConfig,
             tol: Optional[float] = None) -> DsCheck:
    """Direct-sum condition: the folded cross-correlation of the sampling
    and generator responses must be bounded away from zero."""
    corr = sampled_cross_correlation(s, a, cfg)
    cut = _tol(corr, tol)
    min_abs = float(np.abs(corr).min())
    return DsCheck(holds=min_abs > cut, min_abs=min_abs)


def _reciprocal(corr: np.ndarray, cut: float, strategy: Strategy,
                error: type) -> np.ndarray:
    """1/corr with either a hard failure (DS) or a zero fallback (LS/MX)."""
    small = np.abs(corr) <= cut
    if strategy is Strategy.DS:
        if np.any(small):
            raise error("folded correlation vanishes; direct-sum condition fails")
        return 1.0 / corr
    out = np.zeros_like(corr)
    np.divide(1.0, corr, out=out, where=~small)
    return out


def design_subspace_unconstrained(s: SpectralFilter, a: SpectralFilter,
                                  cfg: SamplingConfig,
                                  strategy: Strategy = Strategy.DS) -> RecoveryDesign:
    """Unconstrained subspace-prior design: reconstruct with the generator
    itself and correct by the inverse folded cross-correlation.

    Under DS the design is an oblique projection and recovers every PGS
    signal exactly; LS/MX replace the inverse by a pseudo-inverse.
    """
    corr = sampled_cross_correlation(s, a, cfg)
    h = _reciprocal(corr, _tol(corr, None), strategy, DsConditionViolated)
    return RecoveryDesign(h, a, strategy, Mode.UNCONSTRAINED)


def design_subspace_predefined(s: SpectralFilter, a: SpectralFilter,
                               w: SpectralFilter, cfg: SamplingConfig,
                               strategy: Strategy = Strategy.DS) -> RecoveryDesign:
    """Subspace-prior design with a fixed reconstruction filter.

    DS and MX use R_wa / (R_sa * R_ww); LS uses 1 / R_sw and ignores the
    generator. DS fails hard when a denominator vanishes, MX/LS fall back
    to zero there.
    """
    if strategy is Strategy.LS:
        corr_sw = sampled_cross_correlation(s, w, cfg)
        h = _reciprocal(corr_sw, _tol(corr_sw, None), Strategy.LS, DsConditionViolated)
        return RecoveryDesign(h, w, strategy, Mode.PREDEFINED)
    corr_sa = sampled_cross_correlation(s, a, cfg)
    corr_ww = sampled_cross_correlation(w, w, cfg)
    corr_wa = sampled_cross_correlation(w, a, cfg)
    denom = corr_sa * corr_ww
    cut = 1e-10 * max(np.abs(denom).max(initial=0.0), 1e-300)
    if strategy is Strategy.DS:
        if np.any(np.abs(corr_sa) <= _tol(corr_sa, None)) or np.any(np.abs(corr_ww) <= _tol(corr_ww, None)):
            raise DsConditionViolated("sampling/reconstruction correlations must be nonzero")
        h = corr_wa / denom
    else:
        small = np.abs(denom) <= cut
        h = np.zeros_like(denom)
        np.divide(corr_wa, denom, out=h, where=~small)
    return RecoveryDesign(h, w, strategy, Mode.PREDEFINED)


def design_smoothness_unconstrained(s: SpectralFilter, v: SpectralFilter,
                                    cfg: SamplingConfig) -> RecoveryDesign:
    """Unconstrained smoothness-prior design.

    The reconstruction response is s / v^2 and the correction is the
    inverse of its folded correlation with the sampling filter; the LS and
    MX strategies coincide here.
    """
    if np.any(v.values == 0):
        raise InvalidParameter("smoothness weighting must be nonzero everywhere")
    w_vals = s.values / v.values**2
    w = SpectralFilter(w_vals)
    corr = sampled_cross_correlation(s, w, cfg)
    if np.any(np.abs(corr) <= _tol(corr, None)):
        raise SingularCorrelation("folded correlation of sampling and s/v^2 vanishes")
    return RecoveryDesign(1.0 / corr, w, Strategy.LS, Mode.UNCONSTRAINED)


def design_smoothness_predefined(s: SpectralFilter, v: SpectralFilter,
                                 w: SpectralFilter, cfg: SamplingConfig,
                                 strategy: Strategy = Strategy.MX) -> RecoveryDesign:
    """Smoothness-prior design with a fixed reconstruction filter.

    LS does not depend on the smoothness weighting and reduces to the
    predefined subspace LS design; MX weighs the correction by the folded
    correlations against s / v^2.
    """
    if strategy is Strategy.LS:
        return design_subspace_predefined(s, w, w, cfg, Strategy.LS)
    if strategy is not Strategy.MX:
        raise InvalidParameter("smoothness predefined designs are LS or MX")
    if np.any(v.values == 0):
        raise InvalidParameter("smoothness weighting must be nonzero everywhere")
    wt = SpectralFilter(s.values / v.values**2)
    corr_swt = sampled_cross_correlation(s, wt, cfg)
    corr_ww = sampled_cross_correlation(w, w, cfg)
    corr_wwt = sampled_cross_correlation(w, wt, cfg)
    denom = corr_swt * corr_ww
    cut = 1e-10 * max(np.abs(denom).max(initial=0.0), 1e-300)
    if np.any(np.abs(denom) <= cut):
        raise SingularCorrelation("correction denominator vanishes")
    return RecoveryDesign(corr_wwt / denom, w, Strategy.MX, Mode.PREDEFINED)


def reconstruct(b: SpectralBasis, design: RecoveryDesign,
                chat: SampledSpectrum) -> np.ndarray:
    """Correct, upsample, filter, and inverse-transform a sampled spectrum:
    x = U diag(w) upsample(h * chat)."""
    if design.w.n != b.n or design.h.shape[0] != chat.config.k or chat.config.n != b.n:
        raise DimensionMismatch("design, basis, and sampled spectrum sizes must agree")
    corrected = design.h * chat.values
    return igft(b, design.w.values * spectral_upsample(corrected, chat.config))


def smoothness_energy(b: SpectralBasis, v: SpectralFilter, x: np.ndarray) -> float:
    """Quadratic smoothness measure: sum_i v[i]^2 |xhat[i]|^2."""
    if v.n != b.n:
        raise DimensionMismatch("filter and basis sizes must agree")
    xhat = gft(b, x)
    return float(np.sum(v.values**2 * np.abs(xhat) ** 2))


def mse_db(x: np.ndarray, xtilde: np.ndarray) -> float:
    """Energy-normalized reconstruction error in decibels:
    10 log10(||x - xt||^2 / ||x||^2), floored at -320 dB."""
    x = np.asarray(x)
    xtilde = np.asarray(xtilde)
    if x.shape != xtilde.shape:
        raise DimensionMismatch("signals must have equal length")
    ref = float(np.sum(np.abs(x) ** 2))
    if ref == 0.0:
        raise ZeroReference("reference signal has zero energy")
    err = float(np.sum(np.abs(x - xtilde) ** 2))
    if err == 0.0:
        return MSE_FLOOR_DB
    return max(10.0 * np.log10(err / ref), MSE_FLOOR_DB)
