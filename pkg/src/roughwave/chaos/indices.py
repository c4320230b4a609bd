"""Multi-indices generated by x_1 * prod_{j>=2} (x_j + x_{j-1})."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import CapacityError, InputError

MAX_ENUMERATED_ORDER = 25


@dataclass(frozen=True, order=True)
class AlphaIndex:
    entries: tuple[int, ...]

    def __post_init__(self):
        e = self.entries
        n = len(e)
        ok = (
            n >= 1
            and all(a in (0, 1, 2) for a in e)
            and e[0] in (1, 2)
            and e[-1] in (0, 1)
            and sum(e) == n
            and all(1 <= a + b <= 3 for a, b in zip(e[:-1], e[1:]))
        )
        if n == 1:
            ok = e == (1,)
        if not ok:
            raise InputError(f"{e} is not an admissible multi-index")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def twos(self) -> int:
        return self.entries.count(2)


def _expand(n: int):
    # Factor j >= 2 contributes x_j ("self") or x_{j-1} ("prev").
    for choice in itertools.product((0, 1), repeat=n - 1):
        alpha = [0] * n
        alpha[0] = 1
        for j, prev in enumerate(choice, start=1):
            alpha[j - 1 if prev else j] += 1
        yield tuple(alpha)


def alpha_index_set(n: int) -> frozenset[AlphaIndex]:
    """All exponent vectors in the expansion of the generating polynomial."""
    if n < 1:
        raise InputError("order must be at least 1")
    if n > MAX_ENUMERATED_ORDER:
        raise CapacityError(f"enumerating 2^{n - 1} indices exceeds the limit n <= {MAX_ENUMERATED_ORDER}")
    return frozenset(AlphaIndex(a) for a in _expand(n))


def generating_polynomial(x) -> np.ndarray:
    """x_1 * prod_{j>=2}(x_j + x_{j-1}) along the last axis."""
    x = np.asarray(x, dtype=float)
    out = x[..., 0].copy()
    for j in range(1, x.shape[-1]):
        out = out * (x[..., j] + x[..., j - 1])
    return out


def monomial_sum(indices, x) -> np.ndarray:
    """Sum over indices of prod_j x_j^alpha_j along the last axis."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape[:-1])
    for a in sorted(indices):
        total = total + np.prod(x ** np.asarray(a.entries), axis=-1)
    return total


def twos_histogram(n: int) -> dict[int, int]:
    """Number of indices of order n with m entries equal to 2, keyed by m.

    Every index has as many 0s as 2s, so this histogram determines any
    symmetric weighted sum. Computed by dynamic programming, no enumeration.
    """
    if n < 1:
        raise InputError("order must be at least 1")
    # state: (base count already assigned to the current entry, number of 2s)
    states = {(1, 0): 1}
    for _ in range(n - 1):
        nxt: dict[tuple[int, int], int] = {}
        for (base, m), c in states.items():
            # factor takes x_j: current entry is final at `base`, next starts at 1
            nxt[(1, m + (base == 2))] = nxt.get((1, m + (base == 2)), 0) + c
            # factor takes x_{j-1}: current entry gains one, next starts at 0
            key = (0, m + (base + 1 == 2))
            nxt[key] = nxt.get(key, 0) + c
        states = nxt
    hist: dict[int, int] = {}
    for (base, m), c in states.items():
        m_final = m + (base == 2)
        hist[m_final] = hist.get(m_final, 0) + c
    return dict(sorted(hist.items()))


def log_weighted_index_sums(log_w: tuple[float, float, float], n_max: int) -> np.ndarray:
    """log of sum_{alpha in A_n} prod_j w(alpha_j) for n = 1..n_max.

    Uses the two-state transfer matrix of the generating polynomial; the
    state is how many factors already point at the current coordinate.
    """
    lw0, lw1, lw2 = log_w
    # M[b, b'] with b the running base of the current entry
    logM = np.array([[lw1, lw0], [lw2, lw1]])
    out = np.empty(n_max)
    logv = np.array([-np.inf, 0.0])
    shift = 0.0
    final = np.array([lw0, lw1])
    for n in range(1, n_max + 1):
        if n > 1:
            logv = np.logaddexp(logv[0] + logM[0], logv[1] + logM[1])
            s = logv.max()
            logv -= s
            shift += s
        out[n - 1] = shift + np.logaddexp(logv[0] + final[0], logv[1] + final[1])
    return out
