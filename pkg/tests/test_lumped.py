import math

import numpy as np
import pytest

from fsskit import (
    OPEN,
    HybridCircuit,
    Inductor,
    Parallel,
    SeriesLC,
    Tank,
    branch_impedance,
    foster_transform,
    hybrid_impedance,
)
from fsskit.errors import DegenerateTransformError, InvalidParameterError

# At this frequency 2*pi*f rounds to exactly 1.0 rad/s, so a 1 H / 1 F tank
# is exactly open and a 1 H / 1 F series branch is exactly short.
F_UNIT = 1.0 / (2.0 * math.pi)


def test_series_lc_short_at_resonance():
    b = SeriesLC(4.9e-9, 0.5e-12)
    z = branch_impedance(b, b.resonance())
    assert abs(z) < 1e-6  # essentially zero against ~100 ohm reactance scale


def test_series_lc_exact_short_handled():
    z = branch_impedance(SeriesLC(1.0, 1.0), F_UNIT)
    assert z == 0j


def test_series_lc_off_resonance_reactance():
    b = SeriesLC(4.9e-9, 0.5e-12, R=0.5)
    f = 1e9
    w = 2 * math.pi * f
    assert branch_impedance(b, f) == pytest.approx(
        0.5 + 1j * (w * 4.9e-9 - 1 / (w * 0.5e-12))
    )


def test_inductor_impedance():
    z = branch_impedance(Inductor(0.8e-9), 1e9)
    assert z == pytest.approx(5.0265482j, rel=1e-7)


def test_tank_open_at_exact_resonance():
    assert branch_impedance(Tank(1.0, 1.0), F_UNIT) is OPEN


def test_tank_with_conductance_is_finite_at_resonance():
    z = branch_impedance(Tank(1.0, 1.0, G=0.01), F_UNIT)
    assert z == pytest.approx(100.0)


def test_parallel_with_open_branch_is_identity():
    lone = SeriesLC(2.0, 3.0)
    combo = Parallel((lone, Tank(1.0, 1.0)))
    assert branch_impedance(combo, F_UNIT) == branch_impedance(lone, F_UNIT)


def test_parallel_with_short_branch_is_short():
    combo = Parallel((Tank(2.0, 3.0), SeriesLC(1.0, 1.0)))
    assert branch_impedance(combo, F_UNIT) == 0j


def test_parallel_permutation_invariance(rng):
    branches = [
        SeriesLC(4.9e-9, 0.5e-12),
        Inductor(0.8e-9),
        Tank(4e-9, 0.35e-12),
    ]
    f = 2.2e9
    base = branch_impedance(Parallel(tuple(branches)), f)
    for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
        z = branch_impedance(Parallel(tuple(branches[i] for i in perm)), f)
        assert z == pytest.approx(base, rel=1e-14)


def test_branch_validation():
    with pytest.raises(InvalidParameterError):
        SeriesLC(0.0, 1e-12)
    with pytest.raises(InvalidParameterError):
        Tank(1e-9, -1e-12)
    with pytest.raises(InvalidParameterError):
        SeriesLC(1e-9, 1e-12, R=-0.1)
    with pytest.raises(InvalidParameterError):
        Inductor(-1e-9)
    with pytest.raises(InvalidParameterError):
        Parallel(())
    with pytest.raises(InvalidParameterError):
        branch_impedance(SeriesLC(1e-9, 1e-12), 0.0)


def test_foster_transform_boundary_identities():
    l1, c1, l2, c2 = 4.9e-9, 0.5e-12, 2e-9, 1e-12
    h = foster_transform(l1, c1, l2, c2)
    assert h.C_series == pytest.approx(c1 + c2)
    assert h.C_series == pytest.approx(1.5e-12)
    assert h.L_series == pytest.approx(l1 * l2 / (l1 + l2))
    assert h.L_series == pytest.approx(1.42029e-9, rel=1e-5)
    wp = 1.0 / math.sqrt(h.L_tank * h.C_tank)
    wp_expected = math.sqrt((c1 + c2) / (c1 * c2 * (l1 + l2)))
    assert wp == pytest.approx(wp_expected, rel=1e-12)


def test_foster_transform_impedance_equality_oracle():
    l1, c1, l2, c2 = 4.9e-9, 0.5e-12, 2e-9, 1e-12
    h = foster_transform(l1, c1, l2, c2)
    f1 = SeriesLC(l1, c1).resonance()
    f2 = SeriesLC(l2, c2).resonance()
    fp = math.sqrt((c1 + c2) / (c1 * c2 * (l1 + l2))) / (2 * math.pi)
    freqs = np.geomspace(0.1 * min(f1, f2), 10 * max(f1, f2), 200)
    special = np.array([f1, f2, fp])
    keep = np.all(
        np.abs(freqs[:, None] - special[None, :]) > 1e-3 * special[None, :], axis=1
    )
    worst = 0.0
    for f in freqs[keep]:
        za = branch_impedance(SeriesLC(l1, c1), f)
        zb = branch_impedance(SeriesLC(l2, c2), f)
        z_par = za * zb / (za + zb)
        z_hyb = hybrid_impedance(h, f)
        worst = max(worst, abs(z_hyb - z_par) / abs(z_par))
    assert worst < 1e-9


def test_foster_transform_random_pairs(rng):
    for _ in range(200):
        l1 = 10 ** rng.uniform(-9.5, -7.5)
        c1 = 10 ** rng.uniform(-13.5, -11.5)
        ratio = 10 ** rng.uniform(0.1, 1.0)  # keep resonances apart
        l2 = 10 ** rng.uniform(-9.5, -7.5)
        c2 = 1.0 / (l2 * (ratio / math.sqrt(l1 * c1)) ** 2)
        h = foster_transform(l1, c1, l2, c2)  # verifies itself on construction
        f = math.sqrt(SeriesLC(l1, c1).resonance() * SeriesLC(l2, c2).resonance())
        za = branch_impedance(SeriesLC(l1, c1), f)
        zb = branch_impedance(SeriesLC(l2, c2), f)
        z_par = za * zb / (za + zb)
        assert hybrid_impedance(h, f) == pytest.approx(z_par, rel=1e-9)


def test_foster_transform_rejects_equal_resonances():
    with pytest.raises(DegenerateTransformError):
        foster_transform(4.9e-9, 0.5e-12, 4.9e-9, 0.5e-12)
    # scaled L/C with the same product also degenerates
    with pytest.raises(DegenerateTransformError):
        foster_transform(4.9e-9, 0.5e-12, 9.8e-9, 0.25e-12)


def test_equal_branch_parallel_limit_is_single_series_lc():
    # the degenerate case the transform rejects: two identical branches in
    # parallel equal one series L-C with L/2, 2C
    l, c = 4.9e-9, 0.5e-12
    f = 2.3e9
    za = branch_impedance(SeriesLC(l, c), f)
    z_par = za / 2.0
    assert branch_impedance(SeriesLC(l / 2, 2 * c), f) == pytest.approx(z_par)


def test_hybrid_circuit_validation():
    with pytest.raises(InvalidParameterError):
        HybridCircuit(0.0, 1e-12, 1e-9, 1e-12)


def test_series_short_forces_transmission_zero(rng):
    # a lossless series branch inside any parallel combination shorts the
    # node at its own resonance
    from fsskit import Substrate, FssStack, stack_sparams

    for _ in range(200):
        l = 10 ** rng.uniform(-9.5, -8.0)
        c = 10 ** rng.uniform(-13.0, -12.0)
        series = SeriesLC(l, c)
        node = Parallel((Inductor(10 ** rng.uniform(-10, -8)), series,
                         Tank(10 ** rng.uniform(-9.5, -8.5), 10 ** rng.uniform(-13, -12))))
        other = Tank(10 ** rng.uniform(-9.5, -8.5), 10 ** rng.uniform(-13, -12))
        sub = Substrate(rng.uniform(1e-4, 2e-3), rng.uniform(1.0, 12.0))
        stack = FssStack((other, sub, node))
        s = stack_sparams(stack, series.resonance())
        assert abs(s.S21) < 1e-8
