"""Reference computations written independently of the package code.

Each oracle takes the slow, obvious route so that agreement with the package
is evidence rather than a tautology.
"""
import re
from fractions import Fraction

import numpy as np


def savgol_exact(n, p):
    """Smoothing weights from the normal equations in exact rationals.

    Solves (A^T A) c = A^T e_j for every unit vector e_j and keeps the
    constant term, which is the fitted value at the window centre.
    """
    half = n // 2
    xs = [Fraction(x) for x in range(-half, half + 1)]
    a = [[x ** k for k in range(p + 1)] for x in xs]
    ata = [[sum(a[r][i] * a[r][j] for r in range(n)) for j in range(p + 1)] for i in range(p + 1)]
    inv = _invert(ata)
    # row 0 of (A^T A)^-1 A^T
    return [sum(inv[0][k] * a[r][k] for k in range(p + 1)) for r in range(n)]


def _invert(m):
    size = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(m)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def savgol_by_polyfit(n, p):
    """Weights read off by fitting a polynomial to each unit impulse."""
    half = n // 2
    x = np.arange(-half, half + 1, dtype=float)
    out = np.empty(n)
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        coeffs = np.polyfit(x, e, p)
        out[j] = np.polyval(coeffs, 0.0)
    return out


def smooth_direct(series, weights):
    """Convolve with explicit mirror indexing, one output at a time."""
    x = list(series)
    size = len(x)
    half = len(weights) // 2

    def at(i):
        while i < 0 or i >= size:
            i = -i if i < 0 else 2 * (size - 1) - i
        return x[i]

    return [sum(w * at(i + k - half) for k, w in enumerate(weights)) for i in range(size)]


def circumstance_direct(s, emotions, alpha, betas):
    """Sentiment term plus the weighted emotion sum, term by term."""
    terms = [alpha * s]
    for label, conf in emotions:
        terms.append(betas[label] * conf)
    total = 0.0
    for t in terms:
        total = total + t
    return total


def fleiss_direct(answers):
    """Fleiss' kappa from a list of per-item answer lists, with plain loops."""
    cats = sorted({a for row in answers for a in row}, key=str)
    n_items = len(answers)
    n = len(answers[0])
    p_items = []
    totals = {c: 0 for c in cats}
    for row in answers:
        agree = 0
        for c in cats:
            k = row.count(c)
            totals[c] += k
            agree += k * (k - 1)
        p_items.append(agree / (n * (n - 1)))
    p_bar = sum(p_items) / n_items
    p_e = sum((totals[c] / (n_items * n)) ** 2 for c in cats)
    return (p_bar - p_e) / (1 - p_e)


WORD = re.compile(r"[A-Za-z]+(?:['’-][A-Za-z]+)*")


def count_words(text):
    return len(WORD.findall(text))


def prominence_direct(x, i):
    """Peak prominence by walking outwards until a higher point or the edge."""
    h = x[i]
    left = x[i]
    j = i - 1
    while j >= 0 and x[j] <= h:
        left = min(left, x[j])
        j -= 1
    right = x[i]
    j = i + 1
    while j < len(x) and x[j] <= h:
        right = min(right, x[j])
        j += 1
    return h - max(left, right)
