"""Physical constants (CODATA 2018, SI)."""

import math

c = 299792458.0                     # m s^-1 (exact)
h = 6.62607015e-34                  # J s (exact)
hbar = h / (2.0 * math.pi)          # J s
k_B = 1.380649e-23                  # J K^-1 (exact)
epsilon_0 = 8.8541878128e-12        # F m^-1
mu_0 = 1.25663706212e-6             # N A^-2

GHz = 1e9
THz = 1e12
um = 1e-6
