"""Geometry knobs and where the bands go.

Re-extracts the circuit and re-sweeps the stack for each perturbed unit
cell, printing the three studies on the small nominal cell:

  * hat length  - everything slides down together,
  * cross slot  - only the upper band moves (the zero is bit-identical),
  * element gap - both bands climb.
"""

from fsskit import FirstOrderGeometry, parametric_sweep

GHZ = 1e9
MM = 1e-3

base = FirstOrderGeometry(
    period=5 * MM,
    hat_length=3 * MM,
    jc_slot=0.15 * MM,
    cross_slot=0.15 * MM,
    jc_gap=0.2 * MM,
    thickness=0.254 * MM,
    eps_r=10.2,
)


def show(param, values_mm):
    print(f"\n{param} sweep:")
    print("   value    f_lower    f_zero     f_upper    BW_low   BW_up    separation")
    points = parametric_sweep(
        base, param, [v * MM for v in values_mm], 0.5 * GHZ, 30 * GHZ, 3001
    )
    for p in points:
        if p.report is None:
            print(f"  {p.value/MM:5.2f} mm  {p.error}")
            continue
        r = p.report
        print(
            f"  {p.value/MM:5.2f} mm"
            f"  {r.f_lower/GHZ:8.4f}  {r.f_zero/GHZ:9.4f}  {r.f_upper/GHZ:8.4f}"
            f"  {100*r.bw_lower:6.1f}%  {100*r.bw_upper:6.1f}%"
            f"  {r.separation/GHZ:8.3f} GHz"
        )


show("hat_length", [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0])
show("cross_slot", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
show("jc_gap", [0.1, 0.2, 0.3, 0.4, 0.5])

print("\nreading the tables:")
print("  hat length: f_lower, f_zero, f_upper all decrease together;")
print("  cross slot: f_zero is bit-identical across the sweep, f_upper climbs,")
print("              and the lower band drifts only a few percent;")
print("  gap: both centers rise as the cell couples across a wider gap.")
