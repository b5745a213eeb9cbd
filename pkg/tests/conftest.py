"""Shared fixtures: the S/C-band reference design used throughout the suite.

Reference values: tuned circuit L_series = 4.9 nH, C_series = 0.5 pF,
L_tank = 4 nH, C_tank = 0.35 pF, parasitic 0.8 nH; unit cell period 8.5 mm,
hat 6.8 mm, slots 0.3/0.2 mm, gap 0.5 mm on a 0.635 mm, eps_r 10.2,
tan_delta 0.0023 substrate.
"""

import numpy as np
import pytest

from fsskit import ExtractedCircuit, FirstOrderGeometry, Substrate


@pytest.fixture
def ref_circuit() -> ExtractedCircuit:
    """Tuned circuit values of the reference design, parasitic included."""
    return ExtractedCircuit(4.9e-9, 0.5e-12, 4e-9, 0.35e-12, 0.8e-9)


@pytest.fixture
def ref_geometry() -> FirstOrderGeometry:
    return FirstOrderGeometry(
        period=8.5e-3,
        hat_length=6.8e-3,
        jc_slot=0.3e-3,
        cross_slot=0.2e-3,
        jc_gap=0.5e-3,
        thickness=0.635e-3,
        eps_r=10.2,
        tan_delta=0.0023,
    )


@pytest.fixture
def ref_substrate() -> Substrate:
    return Substrate(0.635e-3, 10.2, 0.0023)


@pytest.fixture
def nominal_geometry() -> FirstOrderGeometry:
    """Smaller-cell geometry used for the parametric trend studies."""
    return FirstOrderGeometry(
        period=5e-3,
        hat_length=3e-3,
        jc_slot=0.15e-3,
        cross_slot=0.15e-3,
        jc_gap=0.2e-3,
        thickness=0.254e-3,
        eps_r=10.2,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
