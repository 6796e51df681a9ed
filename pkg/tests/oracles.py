"""Independent naive-loop reference implementations for the score metrics.

Deliberately written with plain Python loops and no shared code with the
package, so the production implementations have something honest to be
checked against.
"""

from __future__ import annotations

import math


def oracle_mean(values) -> float:
    total = 0.0
    count = 0
    for v in values:
        total += v
        count += 1
    if count == 0:
        raise ZeroDivisionError("empty")
    return total / count


def oracle_variance(values) -> float:
    values = list(values)
    m = oracle_mean(values)
    total = 0.0
    for v in values:
        total += (v - m) * (v - m)
    return total / len(values)


def oracle_rmse(pairs) -> float:
    total = 0.0
    count = 0
    for a, b in pairs:
        d = a - b
        total += d * d
        count += 1
    return math.sqrt(total / count)


def oracle_agreement(pairs, tau) -> float:
    hits = 0
    count = 0
    for a, b in pairs:
        if abs(a - b) <= tau:
            hits += 1
        count += 1
    return hits / count


def oracle_gap_distribution(pairs) -> list[float]:
    counts = [0] * 6
    total = 0
    for a, b in pairs:
        counts[int(abs(a - b))] += 1
        total += 1
    return [c / total for c in counts]
