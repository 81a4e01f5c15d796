"""critspec: spectra of measure-weighted critical-order operators.

Build curves and singular measures (geometry), evaluate averaged Orlicz
norms (orlicz) and cube coverings (covering), assemble the weighted kernel
operator (kernels, assemble), solve and fit its spectrum (spectra), and
compare against the predicted counting coefficients (asymptotics).  The cli
module ties the pieces into reproducible experiments.
"""

from . import (asymptotics, assemble, bessel, covering, geometry, kernels,
               orlicz, spectra)

__version__ = "0.1.0"
