"""Model parameters and the Bell-mixture initial state.

A two-level atom is coupled resonantly to a single radiation mode while the
atom undergoes pure phase damping.  Everything is dimensionless: time tau is
measured in units of the inverse mode frequency, and both the coupling
``kappa_bar`` and the damping rate ``gamma_bar`` are rates in units of the
mode frequency.

The interaction couples only the pairs {|n,1>, |n+1,2>} of joint
photon-number/atom states (|1> ground, |2> excited), so a density matrix that
starts block diagonal in those pairs stays block diagonal.  ``BlockState``
stores exactly that structure: the populations of each pair, the single
intra-pair coherence, and the weight of the unpaired |0,2> level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson as _scipy_poisson

# Default bound on the neglected Poisson weight above the Fock cutoff.
TAIL_TOL = 1e-12
# Trace bookkeeping is asserted an order of magnitude looser than the tail.
TRACE_TOL = 10.0 * TAIL_TOL

# Defaults used by the CLI and by the key=value config reader.
DEFAULT_KAPPA_BAR = 1.0
DEFAULT_GAMMA_BAR = 0.0
DEFAULT_MEAN_PHOTONS = 5.0
DEFAULT_LAM = 0.0
DEFAULT_P11 = 0.8
DEFAULT_Q11 = 0.5
DEFAULT_BELL_PHASE = math.pi / 6.0


class ParameterError(ValueError):
    """Raised when model parameters fail validation."""


def default_n_max(mean_photons: float) -> int:
    """Fock cutoff that keeps the neglected Poisson tail below TAIL_TOL.

    ceil(N + 12 sqrt(N) + 20) is comfortably past the Poisson bulk for any
    mean N up to at least 20.
    """
    if mean_photons <= 0:
        raise ValueError("mean_photons must be positive")
    return math.ceil(mean_photons + 12.0 * math.sqrt(mean_photons) + 20.0)


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters of one run.

    kappa_bar    atom-field coupling rate, > 0
    gamma_bar    atomic phase-damping rate, >= 0
    mean_photons mean N of the initial Poisson photon distribution, > 0
    lam          weight of the Bell-like piece in the initial atom-field
                 mixture, in [0, 1]
    p11          ground-state probability of the factored atomic part
    q11          ground-state weight inside each Bell-like state, in (0, 1)
    bell_phase   relative phase phi of the Bell amplitudes, in [0, 2 pi)
    n_max        Fock truncation index; None picks default_n_max(N)
    """

    kappa_bar: float
    gamma_bar: float
    mean_photons: float
    lam: float
    p11: float
    q11: float
    bell_phase: float
    n_max: int | None = None

    def __post_init__(self):
        if self.n_max is None:
            # Out-of-range means are reported by validate_params, not here;
            # the placeholder keeps the cutoff usable as an integer.
            cutoff = default_n_max(self.mean_photons) if self.mean_photons > 0 else 1
            object.__setattr__(self, "n_max", cutoff)

    @property
    def p22(self) -> float:
        return 1.0 - self.p11

    @property
    def q22(self) -> float:
        return 1.0 - self.q11


def poisson_pmf(mean: float, n):
    """Poisson weight mean^n e^-mean / n! evaluated in log space.

    Stays finite and accurate far into the tail (n >> mean), where the naive
    product over/underflows.  Accepts a scalar or an integer array for ``n``
    and returns a matching scalar or array.
    """
    if mean <= 0:
        raise ValueError("Poisson mean must be positive")
    arr = np.asarray(n, dtype=float)
    if np.any(arr < 0):
        raise ValueError("photon number must be non-negative")
    out = np.exp(arr * math.log(mean) - mean - gammaln(arr + 1.0))
    if np.ndim(n) == 0:
        return float(out)
    return out


def poisson_tail(mean: float, n_max: int) -> float:
    """Total Poisson weight strictly above n_max."""
    if mean <= 0:
        raise ValueError("Poisson mean must be positive")
    return float(_scipy_poisson.sf(n_max, mean))


@dataclass(frozen=True)
class BlockState:
    """Block-diagonal joint density matrix.

    a[n] = <n|rho_11|n> for n = 0..n_max      (atom ground)
    b[n] = <n|rho_22|n> for n = 0..n_max      (atom excited; b[0] is the
           unpaired |0,2> weight and is a constant of the motion)
    c[n] = <n|rho_12|n+1> for n = 0..n_max-1  (intra-pair coherence)

    The pair {|n,1>, |n+1,2>} carries the 2x2 block
    [[a[n], c[n]], [conj(c[n]), b[n+1]]].  The arrays are frozen after
    construction.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        c = np.array(self.c, dtype=complex)
        if a.ndim != 1 or b.shape != a.shape or c.shape != (a.size - 1,):
            raise ValueError(
                "need len(a) == len(b) == n_max + 1 and len(c) == n_max"
            )
        if a.size < 2:
            raise ValueError("n_max must be at least 1")
        for arr in (a, b, c):
            arr.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def n_max(self) -> int:
        return self.a.size - 1

    def trace(self) -> float:
        return float(np.sum(self.a) + np.sum(self.b))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue over all 2x2 blocks and unpaired levels."""
        a, b_hi, c = self.a[:-1], self.b[1:], self.c
        disc = np.sqrt(0.25 * (a - b_hi) ** 2 + np.abs(c) ** 2)
        lo = float(np.min(0.5 * (a + b_hi) - disc))
        return min(lo, float(self.b[0]), float(self.a[-1]))


def _initial_arrays(params: ModelParams):
    """Raw (a, b, c) arrays of the Bell-mixture initial state, unvalidated."""
    n_max = params.n_max
    pn = poisson_pmf(params.mean_photons, np.arange(n_max + 1))
    lam, q11, q22 = params.lam, params.q11, params.q22
    factored = (1.0 - lam) * params.p11 + lam * q11

    a = factored * pn
    b = np.empty(n_max + 1)
    # |0,2> takes only the factored excited piece; the Bell piece never
    # populates it.
    b[0] = (1.0 - lam) * params.p22 * pn[0]
    b[1:] = (1.0 - lam) * params.p22 * pn[1:] + lam * q22 * pn[:-1]
    c = pn[:-1] * lam * np.sqrt(q11 * q22) * np.exp(-1j * params.bell_phase)
    return a, b, c


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_params: hard errors plus advisory warnings."""

    errors: tuple = field(default_factory=tuple)
    warnings: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_if_invalid(self) -> None:
        if self.errors:
            raise ParameterError("; ".join(self.errors))


def validate_params(params: ModelParams, tail_tol: float = TAIL_TOL) -> ValidationReport:
    """Check ranges, underdamping, truncation, and initial-state positivity.

    The decisive positivity test diagonalizes every initial 2x2 block
    directly.  The closed-form inequality on the mixture weights is reported
    only as a warning when it fails, since it is sufficient but not always
    tight for 0 < lam < 1.
    """
    errors = []
    warnings = []

    if not params.kappa_bar > 0:
        errors.append("kappa_bar must be positive")
    if params.gamma_bar < 0:
        errors.append("gamma_bar must be non-negative")
    if not params.mean_photons > 0:
        errors.append("mean_photons must be positive")
    if not 0.0 <= params.lam <= 1.0:
        errors.append("lambda must lie in [0, 1]")
    if not 0.0 <= params.p11 <= 1.0:
        errors.append("p11 must lie in [0, 1]")
    if not 0.0 < params.q11 < 1.0:
        errors.append("q11 must lie strictly inside (0, 1)")
    if not 0.0 <= params.bell_phase < 2.0 * math.pi:
        errors.append("bell_phase must lie in [0, 2 pi)")
    if not (isinstance(params.n_max, (int, np.integer)) and params.n_max >= 1):
        errors.append("n_max must be an integer >= 1")

    # All pair frequencies must be real: the slowest pair already decides.
    if 4.0 * params.kappa_bar**2 - (0.5 * params.gamma_bar) ** 2 <= 0:
        errors.append(
            "overdamped: need 4 kappa_bar^2 > (gamma_bar / 2)^2 for every pair"
        )

    if not errors:
        tail = poisson_tail(params.mean_photons, params.n_max)
        if tail >= tail_tol:
            errors.append(
                f"Poisson tail above n_max is {tail:.3e} >= {tail_tol:.1e}; "
                "raise n_max"
            )

    if not errors:
        a, b, c = _initial_arrays(params)
        state = BlockState(a=a, b=b, c=c)
        if state.min_eigenvalue() < -1e-12:
            errors.append(
                "initial state is not positive semidefinite "
                f"(min block eigenvalue {state.min_eigenvalue():.3e})"
            )

        if 0.0 < params.lam < 1.0:
            n = np.arange(params.n_max + 1, dtype=float)
            bound = (
                params.lam
                * ((n + 1.0) * params.p11 * params.q22
                   + params.mean_photons * params.p22 * (params.q11 - params.p11))
                + params.mean_photons * params.p11 * params.p22
            )
            bad = np.nonzero(bound < 0)[0]
            if bad.size:
                warnings.append(
                    "advisory mixture-weight inequality fails at n = "
                    f"{bad[0]} (and {bad.size - 1} more); positivity was "
                    "checked directly and decides validity"
                )

    return ValidationReport(errors=tuple(errors), warnings=tuple(warnings))


def build_initial_state(params: ModelParams) -> BlockState:
    """Bell mixture (1 - lam) * rho_atom x rho_field + lam * Bell average.

    The factored piece is diag(p11, p22) for the atom against a Poisson
    field; the Bell piece averages |B(n)><B(n)| over the same Poisson
    weights, with |B(n)> = sqrt(q11) |n+1,1> + sqrt(q22) e^{-i phi} |n,2>.
    """
    validate_params(params).raise_if_invalid()
    a, b, c = _initial_arrays(params)
    return BlockState(a=a, b=b, c=c)


# --- flat key=value config files -------------------------------------------

_CONFIG_FLOAT_KEYS = (
    "kappa_bar",
    "gamma_bar",
    "mean_photons",
    "lambda",
    "p11",
    "q11",
    "bell_phase",
)


def params_from_mapping(mapping: dict) -> ModelParams:
    """Build ModelParams from string key=value pairs, applying defaults."""
    defaults = {
        "kappa_bar": DEFAULT_KAPPA_BAR,
        "gamma_bar": DEFAULT_GAMMA_BAR,
        "mean_photons": DEFAULT_MEAN_PHOTONS,
        "lambda": DEFAULT_LAM,
        "p11": DEFAULT_P11,
        "q11": DEFAULT_Q11,
        "bell_phase": DEFAULT_BELL_PHASE,
    }
    unknown = set(mapping) - set(_CONFIG_FLOAT_KEYS) - {"n_max"}
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    kwargs = {}
    for key in _CONFIG_FLOAT_KEYS:
        raw = mapping.get(key, defaults[key])
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise ParameterError(f"config key {key!r}: not a number: {raw!r}")
        # "lambda" is reserved in Python; the field is called lam.
        kwargs["lam" if key == "lambda" else key] = value
    if "n_max" in mapping:
        try:
            kwargs["n_max"] = int(mapping["n_max"])
        except (TypeError, ValueError):
            raise ParameterError(f"config key 'n_max': not an integer: "
                                 f"{mapping['n_max']!r}")
    return ModelParams(**kwargs)


def read_config(path) -> dict:
    """Parse a flat key=value file into a raw string mapping.

    Blank lines and '#' comments are ignored; keys are the ModelParams field
    names with the mixture weight spelled ``lambda``.
    """
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


def load_params(path) -> ModelParams:
    """Read ModelParams from a flat key=value file; missing keys fall back
    to the module defaults."""
    return params_from_mapping(read_config(path))
