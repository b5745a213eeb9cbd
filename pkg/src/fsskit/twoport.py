"""Complex two-port ABCD algebra and conversion to S-parameters.

The chain (ABCD) matrix relates port-1 voltage/current to port-2 and
cascades left to right by ordinary matrix multiplication.  Units are
strict SI throughout: Hz, ohm, siemens.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    FrequencyMismatchError,
    InvalidParameterError,
    SingularNetworkError,
)

# |denominator| below this is reported as a singular network instead of
# silently turning into infinities.
SINGULAR_DELTA = 1e-30


@dataclass(frozen=True)
class TwoPort:
    """Chain matrix [[A, B], [C, D]] of a linear two-port at one frequency."""

    A: complex
    B: complex
    C: complex
    D: complex
    frequency: float

    def det(self) -> complex:
        """A*D - B*C; equals 1 for any reciprocal network."""
        return self.A * self.D - self.B * self.C


@dataclass(frozen=True)
class SParams:
    """S11/S21 of a two-port between real source and load impedances."""

    S11: complex
    S21: complex
    source_z: float
    load_z: float
    frequency: float


def identity(f: float) -> TwoPort:
    """The neutral element of cascading (a zero-length through)."""
    _check_frequency(f)
    return TwoPort(1.0 + 0j, 0j, 0j, 1.0 + 0j, f)


def shunt(Y, f: float) -> TwoPort:
    """Shunt admittance Y (siemens) to ground.

    ``lumped.OPEN`` (an open branch) is accepted and treated as Y = 0.
    """
    from .lumped import OPEN

    _check_frequency(f)
    if Y is OPEN:
        Y = 0j
    return TwoPort(1.0 + 0j, 0j, complex(Y), 1.0 + 0j, f)


def line(Zc, theta, f: float) -> TwoPort:
    """Transmission-line section with characteristic impedance Zc (ohm) and
    electrical length theta (radians).

    Both arguments may be complex (lossy dielectric); Re(Zc) must be positive.
    """
    _check_frequency(f)
    zc = complex(Zc)
    if zc.real <= 0.0:
        raise InvalidParameterError(
            f"line characteristic impedance must have positive real part, got {Zc!r}"
        )
    th = complex(theta)
    cos_t = cmath.cos(th)
    sin_t = cmath.sin(th)
    return TwoPort(cos_t, 1j * zc * sin_t, 1j * sin_t / zc, cos_t, f)


def cascade(ports) -> TwoPort:
    """Matrix product of two-ports in the given order (port 1 side first)."""
    ports = list(ports)
    if not ports:
        raise InvalidParameterError("cascade requires at least one two-port")
    first = ports[0]
    f = first.frequency
    A, B, C, D = first.A, first.B, first.C, first.D
    for p in ports[1:]:
        if p.frequency != f:
            raise FrequencyMismatchError(
                f"cannot cascade two-ports at {f} Hz and {p.frequency} Hz"
            )
        A, B, C, D = (
            A * p.A + B * p.C,
            A * p.B + B * p.D,
            C * p.A + D * p.C,
            C * p.B + D * p.D,
        )
    return TwoPort(A, B, C, D, f)


def reverse(p: TwoPort) -> TwoPort:
    """The same two-port seen from the opposite side (ports swapped)."""
    det = p.det()
    if abs(det) < SINGULAR_DELTA:
        raise SingularNetworkError("cannot reverse a two-port with zero determinant")
    return TwoPort(p.D / det, p.B / det, p.C / det, p.A / det, p.frequency)


def to_sparams(p: TwoPort, source_z: float, load_z: float) -> SParams:
    """ABCD to S-parameters with independent real reference impedances."""
    if source_z <= 0.0 or load_z <= 0.0:
        raise InvalidParameterError(
            f"reference impedances must be positive, got {source_z}, {load_z}"
        )
    delta = p.A * load_z + p.B + p.C * source_z * load_z + p.D * source_z
    if abs(delta) < SINGULAR_DELTA:
        raise SingularNetworkError(
            f"singular network at {p.frequency} Hz (|denominator| < {SINGULAR_DELTA})"
        )
    s21 = 2.0 * math.sqrt(source_z * load_z) / delta
    s11 = (p.A * load_z + p.B - p.C * source_z * load_z - p.D * source_z) / delta
    return SParams(s11, s21, source_z, load_z, p.frequency)


def _check_frequency(f: float) -> None:
    if not f > 0.0:
        raise InvalidParameterError(f"frequency must be positive, got {f!r}")
