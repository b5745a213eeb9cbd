"""Physical constants, strict SI."""

from scipy.constants import c as C0            # speed of light, m/s
from scipy.constants import epsilon_0 as EPS0  # vacuum permittivity, F/m
from scipy.constants import mu_0 as MU0        # vacuum permeability, H/m

# Free-space wave impedance, ohm.  Pinned to the figure written into
# Touchstone option lines so exported files and internal port impedances
# agree digit for digit.
ETA0 = 376.730313
