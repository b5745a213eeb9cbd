"""Assembly and evaluation of layered shunt/line stacks.

A stack alternates shunt lumped-branch nodes with substrate line sections
and is illuminated by a plane wave of given incidence angle and
polarization.  The first-order build is [tank] -- line -- [series branch
(+ optional parasitic inductor)], the second-order build a symmetric
three-node chain.  Lumped values are taken angle independent;
obliquity enters through the port impedances, the line impedance, and
the electrical length only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .constants import C0, ETA0
from .errors import InvalidParameterError, SingularNetworkError
from .extraction import ExtractedCircuit
from .lumped import (
    Branch,
    Inductor,
    Parallel,
    SeriesLC,
    Tank,
    _admittance,
    _admittance_array,
)
from .twoport import SINGULAR_DELTA, SParams, TwoPort, cascade, identity, line, shunt

_POLARIZATIONS = ("TE", "TM")


@dataclass(frozen=True)
class Incidence:
    """Plane-wave illumination: angle from normal (radians) and polarization."""

    theta: float = 0.0
    polarization: str = "TE"

    def __post_init__(self):
        if not 0.0 <= self.theta < math.pi / 2.0:
            raise InvalidParameterError(
                f"incidence angle must lie in [0, pi/2), got {self.theta}"
            )
        if self.polarization not in _POLARIZATIONS:
            raise InvalidParameterError(
                f"polarization must be one of {_POLARIZATIONS}, got {self.polarization!r}"
            )


@dataclass(frozen=True)
class Substrate:
    thickness: float
    eps_r: float
    tan_delta: float = 0.0

    def __post_init__(self):
        if not self.thickness > 0.0:
            raise InvalidParameterError(
                f"substrate thickness must be positive, got {self.thickness}"
            )
        if not self.eps_r >= 1.0:
            raise InvalidParameterError(f"eps_r must be >= 1, got {self.eps_r}")
        if self.tan_delta < 0.0:
            raise InvalidParameterError(f"tan_delta must be >= 0, got {self.tan_delta}")


@dataclass(frozen=True)
class FssStack:
    """Alternating sequence of shunt branch nodes and substrate line
    sections, outermost nodes first and last.  Immutable; safe to share
    across parallel frequency evaluations."""

    layers: tuple
    incidence: Incidence = Incidence()
    dielectric_loss: bool = False

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if len(layers) < 3 or len(layers) % 2 == 0:
            raise InvalidParameterError(
                "stack must alternate shunt nodes and lines, starting and ending "
                f"with a node (got {len(layers)} layers)"
            )
        for i, layer in enumerate(layers):
            if i % 2 == 0:
                if not isinstance(layer, (SeriesLC, Tank, Inductor, Parallel)):
                    raise InvalidParameterError(
                        f"layer {i} must be a shunt lumped branch, got {layer!r}"
                    )
            elif not isinstance(layer, Substrate):
                raise InvalidParameterError(
                    f"layer {i} must be a Substrate line section, got {layer!r}"
                )
        nodes = layers[::2]
        if len(nodes) == 3 and nodes[0] != nodes[2]:
            raise InvalidParameterError(
                "three-node stacks must be symmetric (identical outer layers)"
            )

    @property
    def nodes(self) -> tuple:
        return self.layers[::2]


def port_impedance(inc: Incidence) -> float:
    """Free-space wave impedance seen by the given polarization at angle theta."""
    if inc.polarization == "TE":
        return ETA0 / math.cos(inc.theta)
    return ETA0 * math.cos(inc.theta)


def incidence_media(inc: Incidence, sub: Substrate, f, dielectric_loss: bool = False):
    """Port impedance, substrate line impedance, and electrical length.

    Snell refraction into the substrate sets the oblique line parameters;
    with ``dielectric_loss`` the substrate permittivity becomes complex and
    so do the line impedance and electrical length.  ``f`` may be a scalar
    or an array (the electrical length scales linearly with it).
    """
    if dielectric_loss and sub.tan_delta > 0.0:
        eps = sub.eps_r * (1.0 - 1j * sub.tan_delta)
    else:
        eps = sub.eps_r
    sin_i = math.sin(inc.theta)
    # cos of the refraction angle; evaluates to exactly 1.0 at normal
    # incidence so TE and TM outputs are bit-identical there.
    cos_r = (1.0 - sin_i * sin_i / eps) ** 0.5
    z_slab = ETA0 / eps ** 0.5
    if inc.polarization == "TE":
        line_z = z_slab / cos_r
    else:
        line_z = z_slab * cos_r
    theta_d = (2.0 * math.pi / C0) * sub.thickness * (eps ** 0.5) * cos_r * f
    return port_impedance(inc), line_z, theta_d


def build_first_order(
    circuit: ExtractedCircuit,
    sub: Substrate,
    inc: Incidence = Incidence(),
    dielectric_loss: bool = False,
) -> FssStack:
    """Two-node stack: bandpass tank, substrate line, bandstop series branch.

    A zero parasitic inductance omits the inductor branch entirely.
    """
    tank = Tank(circuit.L_tank, circuit.C_tank)
    series = SeriesLC(circuit.L_series, circuit.C_series)
    if circuit.L_parasitic > 0.0:
        bottom: Branch = Parallel((Inductor(circuit.L_parasitic), series))
    else:
        bottom = series
    return FssStack((tank, sub, bottom), inc, dielectric_loss)


def build_second_order(
    outer: tuple[SeriesLC, SeriesLC],
    middle: Tank,
    sub: Substrate,
    inc: Incidence = Incidence(),
    dielectric_loss: bool = False,
) -> FssStack:
    """Symmetric three-node stack: two identical outer nodes, each a pair of
    series L-C branches in parallel, around a bandpass tank."""
    branch_a, branch_b = outer
    for b in (branch_a, branch_b):
        if not isinstance(b, SeriesLC):
            raise InvalidParameterError(f"outer branches must be SeriesLC, got {b!r}")
    if not isinstance(middle, Tank):
        raise InvalidParameterError(f"middle layer must be a Tank, got {middle!r}")
    node = Parallel((branch_a, branch_b))
    return FssStack((node, sub, middle, sub, node), inc, dielectric_loss)


def stack_twoport(stack: FssStack, f: float) -> TwoPort:
    """Chain matrix of the whole stack at one frequency.

    Raises SingularNetworkError if a node is a perfect short there (the
    chain matrix does not exist); use stack_sparams for that case.
    """
    parts = []
    for layer in stack.layers:
        if isinstance(layer, Substrate):
            _, line_z, theta_d = incidence_media(
                stack.incidence, layer, f, stack.dielectric_loss
            )
            parts.append(line(line_z, theta_d, f))
        else:
            y = _admittance(layer, 2.0 * math.pi * f)
            if not (cmath.isfinite(y)):
                raise SingularNetworkError(
                    f"shunt node is a perfect short at {f} Hz; no chain matrix exists"
                )
            parts.append(shunt(y, f))
    return cascade(parts)


def stack_sparams(stack: FssStack, f: float) -> SParams:
    """S-parameters of the stack between its free-space ports at one
    frequency, including exact transmission zeros (shorted nodes)."""
    port = port_impedance(stack.incidence)
    parts = []
    for layer in stack.layers:
        if isinstance(layer, Substrate):
            _, line_z, theta_d = incidence_media(
                stack.incidence, layer, f, stack.dielectric_loss
            )
            parts.append(line(line_z, theta_d, f))
        else:
            y = _admittance(layer, 2.0 * math.pi * f)
            if not cmath.isfinite(y):
                return _shorted_sparams(parts, port, f)
            parts.append(shunt(y, f))
    tp = cascade(parts)
    return _to_sparams_equal(tp, port)


def _shorted_sparams(left_parts, port: float, f: float) -> SParams:
    """Response when a node shorts to ground: no transmission, reflection
    set by the sub-network left of the short terminated in 0 ohm."""
    left = cascade(left_parts) if left_parts else identity(f)
    s11 = (left.B - left.D * port) / (left.B + left.D * port)
    return SParams(s11, 0j, port, port, f)


def _to_sparams_equal(tp: TwoPort, port: float) -> SParams:
    delta = tp.A * port + tp.B + tp.C * port * port + tp.D * port
    if abs(delta) < SINGULAR_DELTA:
        raise SingularNetworkError(f"singular network at {tp.frequency} Hz")
    s21 = 2.0 * port / delta
    s11 = (tp.A * port + tp.B - tp.C * port * port - tp.D * port) / delta
    return SParams(s11, s21, port, port, tp.frequency)


def stack_response(stack: FssStack, freqs) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (S11, S21) over a frequency array."""
    s11, s21, _ = _response_arrays(stack, freqs, want_s22=False)
    return s11, s21


def stack_response_full(stack: FssStack, freqs):
    """Vectorized (S11, S21, S22); S12 equals S21 for these reciprocal stacks."""
    return _response_arrays(stack, freqs, want_s22=True)


def _response_arrays(stack: FssStack, freqs, want_s22: bool):
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1 or freqs.size == 0:
        raise InvalidParameterError("frequency grid must be a non-empty 1-D array")
    if np.any(freqs <= 0.0):
        raise InvalidParameterError("all frequencies must be positive")

    w = 2.0 * math.pi * freqs
    port = port_impedance(stack.incidence)
    A = np.ones(freqs.shape, dtype=complex)
    B = np.zeros(freqs.shape, dtype=complex)
    C = np.zeros(freqs.shape, dtype=complex)
    D = np.ones(freqs.shape, dtype=complex)
    shorted = np.zeros(freqs.shape, dtype=bool)

    for layer in stack.layers:
        if isinstance(layer, Substrate):
            _, line_z, theta_d = incidence_media(
                stack.incidence, layer, freqs, stack.dielectric_loss
            )
            cos_t = np.cos(theta_d)
            sin_t = np.sin(theta_d)
            b_line = 1j * line_z * sin_t
            c_line = 1j * sin_t / line_z
            A, B, C, D = (
                A * cos_t + B * c_line,
                A * b_line + B * cos_t,
                C * cos_t + D * c_line,
                C * b_line + D * cos_t,
            )
        else:
            y = _admittance_array(layer, w)
            bad = ~np.isfinite(y)
            if bad.any():
                shorted |= bad
                y = np.where(bad, 0.0, y)
            A = A + B * y
            C = C + D * y

    delta = A * port + B + C * port * port + D * port
    ok = ~shorted
    if np.any(np.abs(delta[ok]) < SINGULAR_DELTA):
        idx = np.nonzero(ok & (np.abs(delta) < SINGULAR_DELTA))[0][0]
        raise SingularNetworkError(f"singular network at {freqs[idx]} Hz")
    s21 = 2.0 * port / delta
    s11 = (A * port + B - C * port * port - D * port) / delta
    s22 = None
    if want_s22:
        s22 = (-A * port + B - C * port * port + D * port) / delta

    if shorted.any():
        reversed_stack = None
        for i in np.nonzero(shorted)[0]:
            f_i = float(freqs[i])
            sp = stack_sparams(stack, f_i)
            s11[i] = sp.S11
            s21[i] = sp.S21
            if want_s22:
                if reversed_stack is None:
                    reversed_stack = FssStack(
                        stack.layers[::-1], stack.incidence, stack.dielectric_loss
                    )
                s22[i] = stack_sparams(reversed_stack, f_i).S11
    return s11, s21, s22
