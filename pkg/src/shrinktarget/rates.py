"""Shrinking rates, time sets and target sequences.

A shrinking rate is a function ``phi: {1, 2, ...} -> (0, 1]``.  The two numbers
that every bound formula consumes are its exponential decay exponents

    tau_upper = limsup_n  -ln(phi(n)) / n,
    tau_lower = liminf_n  -ln(phi(n)) / n.

Because lim sup / lim inf cannot be read off finitely many samples, rates are
parametric families with closed-form exponents rather than arbitrary
callables.  ``tau = +inf`` is representable directly on :class:`RateExponents`
(super-exponential decay); the parametric rate variants themselves carry
finite parameters only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union


class RateError(ValueError):
    """Invalid rate, time set or target data."""


def _check_nonneg(name: str, value: float) -> None:
    if not (value >= 0.0) or math.isnan(value):
        raise RateError(f"{name} must be a nonnegative real, got {value!r}")


@dataclass(frozen=True)
class RateExponents:
    """The pair (tau_upper, tau_lower); either entry may be ``math.inf``."""

    tau_upper: float
    tau_lower: float

    def __post_init__(self) -> None:
        for name in ("tau_upper", "tau_lower"):
            v = getattr(self, name)
            if math.isnan(v) or v < 0.0:
                raise RateError(f"{name} must be in [0, +inf], got {v!r}")
        if self.tau_lower > self.tau_upper:
            raise RateError(
                f"tau_lower={self.tau_lower} exceeds tau_upper={self.tau_upper}"
            )


class RateFunction:
    """Base class for shrinking rates.  Subclasses are immutable.

    ``phi(n)`` may underflow to 0.0 in binary64 once -ln(phi(n)) exceeds ~745;
    ``log_phi(n)`` stays exact for the exponential-type variants and is what
    hit checks should compare against.
    """

    def phi(self, n: int) -> float:
        raise NotImplementedError

    def log_phi(self, n: int) -> float:
        """ln(phi(n)), computed without evaluating phi when possible."""
        return math.log(self.phi(n))

    def exponents(self) -> RateExponents:
        raise NotImplementedError

    def _phi_checked(self, n: int) -> float:
        if n < 1:
            raise RateError(f"phi is defined on n >= 1, got n={n}")
        return self.phi(n)


@dataclass(frozen=True)
class Exponential(RateFunction):
    """phi(n) = exp(-tau * n)."""

    tau: float

    def __post_init__(self) -> None:
        _check_nonneg("tau", self.tau)
        if math.isinf(self.tau):
            raise RateError(
                "Exponential requires finite tau; use RateExponents directly "
                "for the tau = +inf degenerate case"
            )

    def phi(self, n: int) -> float:
        return math.exp(-self.tau * n)

    def log_phi(self, n: int) -> float:
        return -self.tau * n

    def exponents(self) -> RateExponents:
        return RateExponents(self.tau, self.tau)


@dataclass(frozen=True)
class PowerLaw(RateFunction):
    """phi(n) = min(1, n^-a); sub-exponential, so both exponents are 0."""

    a: float

    def __post_init__(self) -> None:
        _check_nonneg("a", self.a)
        if math.isinf(self.a):
            raise RateError("PowerLaw requires finite a")

    def phi(self, n: int) -> float:
        return min(1.0, float(n) ** (-self.a))

    def exponents(self) -> RateExponents:
        return RateExponents(0.0, 0.0)


@dataclass(frozen=True)
class PiecewiseExponential(RateFunction):
    """phi(n) = exp(-taus[n mod period] * n).

    The exponent along the residue class r is exactly taus[r], so
    tau_upper = max(taus) and tau_lower = min(taus).
    """

    period: int
    taus: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.period < 1:
            raise RateError(f"period must be >= 1, got {self.period}")
        object.__setattr__(self, "taus", tuple(float(t) for t in self.taus))
        if len(self.taus) != self.period:
            raise RateError(
                f"need exactly {self.period} taus, got {len(self.taus)}"
            )
        for t in self.taus:
            _check_nonneg("taus entry", t)
            if math.isinf(t):
                raise RateError("PiecewiseExponential requires finite taus")

    def phi(self, n: int) -> float:
        return math.exp(-self.taus[n % self.period] * n)

    def log_phi(self, n: int) -> float:
        return -self.taus[n % self.period] * n

    def exponents(self) -> RateExponents:
        return RateExponents(max(self.taus), min(self.taus))


@dataclass(frozen=True)
class Tabulated(RateFunction):
    """Finite table of values in (0, 1] followed by an exp(-tail_tau * n) tail.

    The finite prefix never affects lim sup / lim inf, so both exponents equal
    tail_tau.  Out-of-range table entries are rejected, never clamped.
    """

    values: tuple[float, ...]
    tail_tau: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for i, v in enumerate(self.values):
            if not (0.0 < v <= 1.0):
                raise RateError(
                    f"values[{i}]={v!r} outside (0, 1]; table entries are "
                    "rejected, not clamped"
                )
        _check_nonneg("tail_tau", self.tail_tau)
        if math.isinf(self.tail_tau):
            raise RateError("Tabulated requires finite tail_tau")

    def phi(self, n: int) -> float:
        if n <= len(self.values):
            return self.values[n - 1]
        return math.exp(-self.tail_tau * n)

    def log_phi(self, n: int) -> float:
        if n <= len(self.values):
            return math.log(self.values[n - 1])
        return -self.tail_tau * n

    def exponents(self) -> RateExponents:
        return RateExponents(self.tail_tau, self.tail_tau)


@dataclass(frozen=True)
class TabulatedPeriodic(RateFunction):
    """Composite of a Tabulated prefix with a PiecewiseExponential tail.

    Produced by :func:`restrict_rate`; not normally constructed by hand.
    phi(n) = prefix[n-1] for n <= len(prefix), else exp(-taus[n mod period]*n).
    """

    prefix: tuple[float, ...]
    period: int
    taus: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(float(v) for v in self.prefix))
        for i, v in enumerate(self.prefix):
            if not (0.0 < v <= 1.0):
                raise RateError(f"prefix[{i}]={v!r} outside (0, 1]")
        if self.period < 1 or len(self.taus) != self.period:
            raise RateError("period/taus mismatch")
        object.__setattr__(self, "taus", tuple(float(t) for t in self.taus))
        for t in self.taus:
            _check_nonneg("taus entry", t)

    def phi(self, n: int) -> float:
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return math.exp(-self.taus[n % self.period] * n)

    def log_phi(self, n: int) -> float:
        if n <= len(self.prefix):
            return math.log(self.prefix[n - 1])
        return -self.taus[n % self.period] * n

    def exponents(self) -> RateExponents:
        return RateExponents(max(self.taus), min(self.taus))


# ---------------------------------------------------------------------------
# Time sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AllTimes:
    """S = {0, 1, 2, ...}."""

    def contains(self, n: int) -> bool:
        return n >= 0

    @property
    def bounded(self) -> bool:
        return False


@dataclass(frozen=True)
class Arithmetic:
    """S = {offset, offset + step, offset + 2*step, ...}."""

    offset: int
    step: int

    def __post_init__(self) -> None:
        if self.offset < 0:
            raise RateError(f"offset must be >= 0, got {self.offset}")
        if self.step < 1:
            raise RateError(f"step must be >= 1, got {self.step}")

    def contains(self, n: int) -> bool:
        return n >= self.offset and (n - self.offset) % self.step == 0

    @property
    def bounded(self) -> bool:
        return False


@dataclass(frozen=True)
class Explicit:
    """A sorted strictly-increasing list, optionally continued arithmetically.

    Without a tail rule the set is finite - a degenerate input that most
    operations reject via :attr:`bounded`.
    """

    times: tuple[int, ...]
    tail: Arithmetic | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", tuple(int(t) for t in self.times))
        if any(t < 0 for t in self.times):
            raise RateError("explicit times must be nonnegative")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise RateError("explicit times must be strictly increasing")
        if self.tail is not None and self.times and self.tail.offset <= self.times[-1]:
            raise RateError(
                "tail rule must start strictly after the last explicit time"
            )

    def contains(self, n: int) -> bool:
        if n in self.times:
            return True
        return self.tail is not None and self.tail.contains(n)

    @property
    def bounded(self) -> bool:
        return self.tail is None


TimeSet = Union[AllTimes, Arithmetic, Explicit]


def time_set_members(s: TimeSet, start: int, stop: int) -> Iterator[int]:
    """Yield the members of ``s`` in ``[start, stop)`` in increasing order."""
    for n in range(max(start, 0), stop):
        if s.contains(n):
            yield n


def first_member_at_least(s: TimeSet, n: int) -> int:
    """Smallest element of ``s`` that is >= n; raises on bounded exhaustion."""
    n = max(n, 0)
    if isinstance(s, AllTimes):
        return n
    if isinstance(s, Arithmetic):
        if n <= s.offset:
            return s.offset
        k = -((s.offset - n) // s.step)
        return s.offset + k * s.step
    for t in s.times:
        if t >= n:
            return t
    if s.tail is None:
        raise RateError(f"bounded time set exhausted looking for element >= {n}")
    return first_member_at_least(s.tail, n)


# ---------------------------------------------------------------------------
# Target sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantPoint:
    """z_n = point for all n (phase-space coordinates)."""

    point: tuple[float, ...]


@dataclass(frozen=True)
class EventuallyPeriodic:
    """z_n runs through ``preperiod`` then cycles through ``cycle``."""

    preperiod: tuple[tuple[float, ...], ...]
    cycle: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if not self.cycle:
            raise RateError("cycle must be nonempty")

    def point(self, n: int) -> tuple[float, ...]:
        if n < len(self.preperiod):
            return self.preperiod[n]
        return self.cycle[(n - len(self.preperiod)) % len(self.cycle)]


@dataclass(frozen=True)
class SymbolSequence:
    """One-sided eventually periodic symbol stream head . cycle cycle cycle..."""

    head: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.cycle:
            raise RateError("cycle must be nonempty")
        object.__setattr__(self, "head", tuple(int(x) for x in self.head))
        object.__setattr__(self, "cycle", tuple(int(x) for x in self.cycle))

    def symbol(self, i: int) -> int:
        """0-based coordinate of the stream."""
        if i < len(self.head):
            return self.head[i]
        return self.cycle[(i - len(self.head)) % len(self.cycle)]

    def prefix(self, length: int) -> tuple[int, ...]:
        return tuple(self.symbol(i) for i in range(length))


@dataclass(frozen=True)
class ShiftTarget:
    """Symbolic target sequence: each z_n is an eventually periodic stream.

    The schedule n -> z_n is itself eventually periodic so that "infinitely
    many n" questions stay decidable.
    """

    preperiod: tuple[SymbolSequence, ...]
    cycle: tuple[SymbolSequence, ...]

    def __post_init__(self) -> None:
        if not self.cycle:
            raise RateError("cycle must be nonempty")

    def target(self, n: int) -> SymbolSequence:
        if n < len(self.preperiod):
            return self.preperiod[n]
        return self.cycle[(n - len(self.preperiod)) % len(self.cycle)]

    @property
    def schedule_period(self) -> int:
        return len(self.cycle)

    @property
    def schedule_preperiod(self) -> int:
        return len(self.preperiod)


def constant_shift_target(z: SymbolSequence) -> ShiftTarget:
    return ShiftTarget(preperiod=(), cycle=(z,))


TargetSequence = Union[ConstantPoint, EventuallyPeriodic, ShiftTarget]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def tau_exponents(phi: RateFunction) -> RateExponents:
    """Closed-form (tau_upper, tau_lower) of a parametric rate."""
    return phi.exponents()


def family_tau(exponents: Sequence[RateExponents]) -> RateExponents:
    """Componentwise suprema over a countable family (tau_j bars)."""
    if not exponents:
        raise RateError("empty family")
    return RateExponents(
        max(e.tau_upper for e in exponents),
        max(e.tau_lower for e in exponents),
    )


_MAX_PREFIX = 1_000_000


def _tail_tau_at(phi: RateFunction, residue: int, period: int) -> float:
    """Exponent of phi's tail along the residue class (exponential-type rates)."""
    if isinstance(phi, Exponential):
        return phi.tau
    if isinstance(phi, Tabulated):
        return phi.tail_tau
    if isinstance(phi, (PiecewiseExponential, TabulatedPeriodic)):
        # residue classes of the composite period map to phi's own classes
        return phi.taus[residue % phi.period]
    raise RateError(f"unsupported rate variant {type(phi).__name__}")


def _base_prefix_len(phi: RateFunction) -> int:
    if isinstance(phi, Tabulated):
        return len(phi.values)
    if isinstance(phi, TabulatedPeriodic):
        return len(phi.prefix)
    return 0


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def restrict_rate(phi: RateFunction, s: TimeSet) -> RateFunction:
    """The rate equal to phi on S and 1 off S.

    Only hit times in S consult phi, so replacing phi by the restricted rate
    leaves the shrinking target set unchanged while never decreasing phi
    pointwise; the restricted tau_upper is limsup of -ln(phi(n))/n over n in S.

    PowerLaw rates are returned unchanged: their exponents are (0, 0) on every
    unbounded S and the off-S values do not admit an exponential-form
    representation.
    """
    if s.bounded:
        raise RateError("cannot restrict to a bounded time set")
    if isinstance(s, AllTimes):
        return phi
    if isinstance(phi, PowerLaw):
        return phi

    if isinstance(s, Arithmetic):
        tail = s
        explicit: tuple[int, ...] = ()
    else:
        assert isinstance(s, Explicit) and s.tail is not None
        tail = s.tail
        explicit = s.times

    base_period = phi.period if isinstance(phi, (PiecewiseExponential, TabulatedPeriodic)) else 1
    period = _lcm(base_period, tail.step)
    # Prefix covers the base table, the explicit times and the pre-tail range
    # so the periodic section is exact from the first coordinate it governs.
    prefix_len = max(
        _base_prefix_len(phi),
        explicit[-1] if explicit else 0,
        tail.offset - 1 if tail.offset >= 1 else 0,
    )
    if prefix_len > _MAX_PREFIX:
        raise RateError(f"restriction prefix of length {prefix_len} is unreasonably large")

    prefix = tuple(
        phi._phi_checked(n) if s.contains(n) else 1.0
        for n in range(1, prefix_len + 1)
    )
    taus = tuple(
        _tail_tau_at(phi, c, period) if (c - tail.offset) % tail.step == 0 else 0.0
        for c in range(period)
    )
    return TabulatedPeriodic(prefix=prefix, period=period, taus=taus)
