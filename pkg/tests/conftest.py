"""Shared test utilities and the acceptance-summary reporter."""

import math

import numpy as np

# Lines recorded by the acceptance tests; printed in the terminal summary so
# they are visible even with output capture enabled.
ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def max_state_dev(s1, s2) -> float:
    """Largest elementwise difference between two block states."""
    return max(
        float(np.abs(s1.a - s2.a).max()),
        float(np.abs(s1.b - s2.b).max()),
        float(np.abs(s1.c - s2.c).max()),
    )


def burst_center_and_amplitude(taus, values, center, half_width=8.0):
    """Locate one revival burst inside a window around ``center``.

    The cluster center is the |signal|^2-weighted centroid of the deviation
    from the window median (the median removes the flat plateau between
    bursts); the amplitude is the largest absolute deviation.
    """
    taus = np.asarray(taus, dtype=float)
    values = np.asarray(values, dtype=float)
    win = (taus >= center - half_width) & (taus <= center + half_width)
    t = taus[win]
    dev = np.abs(values[win] - np.median(values[win]))
    weight = dev**2
    centroid = float(np.sum(t * weight) / np.sum(weight))
    return centroid, float(dev.max())


def rabi_e(kappa_bar: float, gamma_bar: float, n: int) -> float:
    """Independent pair-frequency evaluation used by oracle-style checks."""
    return math.sqrt(4.0 * kappa_bar**2 * (n + 1.0) - (0.5 * gamma_bar) ** 2)
