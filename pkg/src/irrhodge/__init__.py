"""Exact computation of irregular Hodge filtrations at infinity.

The package works with free modules over Q[h] carrying an action of
h^2 d/dh with polynomial matrix (pole of order at most two at h = 0) and a
regular singularity at infinity.  It computes the Deligne lattice family at
v = 1/h = 0, the Harder-Narasimhan and irregular Hodge filtrations on the
fiber at h = 1, and the spectrum at infinity, and cross-verifies the closed
formulas (tensor, duality, wedge, hypergeometric) against the direct
pipeline.  All arithmetic is exact rational; no floating point anywhere.
"""

from .connection import (Connection, FilteredSpace, direct_sum, dual,
                         exponential_twist, fiber, from_filtered_space,
                         gauge_transform, hypergeometric, make_connection,
                         tate_twist, tensor, trivial, wedge)
from .hodge import (FiltrationTable, SectionSpace, Spectrum, analyze,
                    build_v_adapted_lattice, check_duality_formula,
                    check_tensor_formula, global_sections, graded_v_pieces,
                    hn_filtration, irr_hodge_filtration, spectrum)
from .formulas import (HypergeomParams, convolve_spectra, grassmannian_d,
                       hypergeom_rank, hypergeom_spectrum, verify_hypergeom,
                       wedge_spectrum)
from .rescale import (RescaledModule, check_nilpotency, check_strictness,
                      grading_oracle, grading_oracle_full, rescale_module,
                      rescaled_dual_check, rescaled_v_piece)
from .vfiltration import (VChartSystem, VFiltration, residue, saturate,
                          shear_to_window, to_v_chart, v_filtration_family)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
