"""Same-length window smoothers: rolling mean, triangular mean, Savitzky-Golay.

All three are symmetric FIR filters whose weights sum to one. Series ends
are mirror-padded (edge sample not repeated), which keeps constants exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ROLLING_MEAN = "rolling_mean"
TRIANGULAR_MEAN = "triangular_mean"
SAVITZKY_GOLAY = "savitzky_golay"
KINDS = (ROLLING_MEAN, TRIANGULAR_MEAN, SAVITZKY_GOLAY)
FILTER_ALIASES = {"mean": ROLLING_MEAN, "triangular": TRIANGULAR_MEAN, "savgol": SAVITZKY_GOLAY}

MIN_WINDOW = 5
DEFAULT_POLYORDER = 3


class WindowError(ValueError):
    pass


def savgol_coefficients(n: int, p: int, deriv: int = 0) -> np.ndarray:
    """Least-squares polynomial smoothing weights for a centred window.

    Fitting a degree-``p`` polynomial to ``n`` equally spaced samples and
    evaluating its ``deriv``-th derivative at the centre is a dot product of
    the samples with these weights. For ``deriv=0`` they sum to 1.
    """
    if not isinstance(n, (int, np.integer)) or n < 1 or n % 2 == 0:
        raise WindowError(f"window size must be a positive odd integer, got {n}")
    if not 0 <= p < n:
        raise WindowError(f"polynomial order must satisfy 0 <= p < n, got p={p}, n={n}")
    if deriv < 0:
        raise WindowError(f"derivative order must be non-negative, got {deriv}")
    if deriv > p:
        return np.zeros(n)
    half = n // 2
    x = np.arange(-half, half + 1, dtype=float)
    # design matrix transposed: row k holds x**k
    design_t = x[np.newaxis, :] ** np.arange(p + 1)[:, np.newaxis]
    target = np.zeros(p + 1)
    target[deriv] = math.factorial(deriv)
    # minimum-norm h with design_t @ h = target is the row of the pseudo-inverse
    weights, *_ = np.linalg.lstsq(design_t, target, rcond=None)
    return weights


def _triangular_weights(n: int) -> np.ndarray:
    half = n // 2
    w = np.array([half + 1 - abs(k) for k in range(-half, half + 1)], dtype=float)
    return w / w.sum()


def window_size_for(length: int) -> int:
    """Default window: a tenth of the series, at least 5, rounded up to odd."""
    n = max(MIN_WINDOW, math.floor(length / 10 + 0.5))
    return n if n % 2 else n + 1


@dataclass(frozen=True)
class WindowSpec:
    kind: str = SAVITZKY_GOLAY
    n: int | None = None  # None: sized from the series length
    p: int | None = DEFAULT_POLYORDER

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WindowError(f"unknown window kind {self.kind!r}; expected one of {KINDS}")
        if self.n is not None:
            if self.n < 3 or self.n % 2 == 0:
                raise WindowError(f"window size must be an odd integer >= 3, got {self.n}")
            if self.kind == SAVITZKY_GOLAY:
                self._check_order(self.n)

    def _check_order(self, n):
        if self.p is None or not 0 <= self.p < n:
            raise WindowError(f"savitzky_golay needs 0 <= p < n, got p={self.p}, n={n}")

    def resolve(self, length: int) -> "WindowSpec":
        if self.n is not None:
            return self
        return WindowSpec(self.kind, window_size_for(length), self.p)

    def weights(self) -> np.ndarray:
        if self.n is None:
            raise WindowError("window size unresolved; call resolve() first")
        if self.kind == ROLLING_MEAN:
            return np.full(self.n, 1.0 / self.n)
        if self.kind == TRIANGULAR_MEAN:
            return _triangular_weights(self.n)
        return savgol_coefficients(self.n, self.p)


def apply_window(series, spec: WindowSpec) -> tuple[np.ndarray, bool]:
    """Smooth ``series`` and report whether it was passed through.

    Returns ``(values, passed_through)``. A series shorter than the window is
    returned unchanged with ``passed_through=True``.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise WindowError("series must be a non-empty 1-D sequence")
    spec = spec.resolve(x.size)
    if x.size < spec.n:
        return x.copy(), True
    w = spec.weights()
    half = spec.n // 2
    padded = np.pad(x, half, mode="reflect")
    return np.correlate(padded, w, mode="valid"), False
