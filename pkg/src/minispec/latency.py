"""The token-count latency model: latency = a*Np + b*No + c.

Fitting is ordinary least squares over the two-regressor affine model, with
a and b clamped at zero. The design matrix must have full column rank; with
--fix-a-zero style fits the Np column is dropped and a is pinned to 0.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDesign

_RANK_TOL = 1e-9


@dataclass(frozen=True)
class LatencySample:
    np_tokens: int
    no_tokens: int
    latency_s: float


@dataclass
class LatencyModel:
    a: float
    b: float
    c: float
    rms_residual: float
    stderr: tuple = (0.0, 0.0, 0.0)  # standard errors of (a, b, c)

    def predict(self, np_tokens, no_tokens):
        return self.a * np_tokens + self.b * no_tokens + self.c


def fit_latency(samples, fix_a_zero=False):
    if len(samples) < 3:
        raise DegenerateDesign("need at least 3 samples")
    nps = np.array([s.np_tokens for s in samples], dtype=float)
    nos = np.array([s.no_tokens for s in samples], dtype=float)
    lat = np.array([s.latency_s for s in samples], dtype=float)

    if fix_a_zero:
        design = np.column_stack([nos, np.ones_like(nos)])
    else:
        design = np.column_stack([nps, nos, np.ones_like(nps)])
    if np.linalg.matrix_rank(design, tol=_RANK_TOL * max(1.0, design.max())) \
            < design.shape[1]:
        raise DegenerateDesign("design matrix is rank-deficient; vary both "
                               "Np and No (or fix a to zero)")

    coef, _res, _rank, _sv = np.linalg.lstsq(design, lat, rcond=None)
    residuals = lat - design @ coef
    dof = max(len(samples) - design.shape[1], 1)
    sigma2 = float(residuals @ residuals) / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    errs = np.sqrt(np.diag(cov))

    if fix_a_zero:
        a, b, c = 0.0, coef[0], coef[1]
        stderr = (0.0, float(errs[0]), float(errs[1]))
    else:
        a, b, c = (float(v) for v in coef)
        stderr = tuple(float(e) for e in errs)
    a, b = max(a, 0.0), max(b, 0.0)
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    return LatencyModel(a, b, c, rms, stderr)


def generate_samples(a, b, c, pairs, noise_sigma=0.0, seed=None):
    """Synthetic samples from known coefficients, optionally noisy."""
    rng = np.random.default_rng(seed)
    out = []
    for np_tokens, no_tokens in pairs:
        latency = a * np_tokens + b * no_tokens + c
        if noise_sigma > 0:
            latency += rng.normal(0.0, noise_sigma)
        out.append(LatencySample(np_tokens, no_tokens, latency))
    return out


def read_samples_csv(text):
    """Parse `np,no,latency_s` rows (header optional)."""
    out = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].strip().lower() in ("np", ""):
            continue
        out.append(LatencySample(int(row[0]), int(row[1]), float(row[2])))
    return out
