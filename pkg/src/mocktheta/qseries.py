"""Exact q-series coefficients: the mock theta function f(q) and p(n)."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator, Literal

MAX_RANK_ORACLE = 40


@dataclass(frozen=True)
class CoeffTable:
    kind: Literal["alpha", "partition"]
    max_index: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "value"])
        for i, v in enumerate(self.values):
            w.writerow([i, v])


def _divide_by_one_plus_qj(series: list[int], j: int) -> None:
    # in place: series *= 1/(1+q^j) = sum_m (-1)^m q^(jm), truncated
    for i in range(j, len(series)):
        series[i] -= series[i - j]


def alpha_exact(max_n: int) -> CoeffTable:
    """Coefficients of f(q) = 1 + sum_{k>=1} q^(k^2) / ((1+q)^2 ... (1+q^k)^2) up to q^max_n."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    coeffs = [0] * (max_n + 1)
    coeffs[0] = 1
    prod = [1] + [0] * max_n  # prod_{j<=k} (1+q^j)^(-2), truncated
    k = 1
    while k * k <= max_n:
        width = max_n + 1 - k * k
        del prod[width:]
        _divide_by_one_plus_qj(prod, k)
        _divide_by_one_plus_qj(prod, k)
        for i, v in enumerate(prod):
            coeffs[k * k + i] += v
        k += 1
    return CoeffTable("alpha", max_n, tuple(coeffs))


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of n as nonincreasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def alpha_rank_oracle(n: int) -> int:
    """N_e(n) - N_o(n) by listing every partition and its rank."""
    if n > MAX_RANK_ORACLE:
        raise ValueError(f"rank enumeration is limited to n <= {MAX_RANK_ORACLE}")
    if n < 0:
        return 0
    total = 0
    for lam in partitions(n):
        rank = (lam[0] - len(lam)) if lam else 0
        total += 1 if rank % 2 == 0 else -1
    return total


def partition_exact(max_n: int) -> CoeffTable:
    """p(0..max_n) from Euler's pentagonal-number recurrence."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    p = [1] + [0] * max_n
    for n in range(1, max_n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return CoeffTable("partition", max_n, tuple(p))
