"""Exact verification and construction of spectra and tilings of the unit cube.

Periodic translation sets ``L + R Z^d`` with rational data are classified
exactly (spectral-and-tiling, packing only, or not packing with a witness),
cross-checked by an independent tiling oracle, and in dimensions 1 to 3
built from and recognized as catalog forms.  A separate module treats
spectral and tiling pairs of measures on finite abelian groups.
"""

from .errors import (BudgetExceeded, CubeSpectraError, DimensionMismatch, GroupMismatch,
                     InputError, InvalidForm, NonIntegerDensityWarning, NotSpectral,
                     NotSpectralPair, SingularLattice, UnsupportedDimension, ZeroFunction)
from .exact import det, smith_normal_form, solve_integer_affine
from .lca import (FiniteGroup, FourierOperator, Measure, TranslationUnitary,
                  UncertaintyReport, fourier_transform, is_spectral_pair_measures,
                  is_tiling_pair_measures, pairing, reflect_measure, uncertainty_report)
from .lowdim import (CrossProductSpec, Dim1Form, Dim2Form, Dim3Form, Orientation,
                     PeriodicTable, Recognition, TowerSpec, build, build_1d, build_2d,
                     build_3d, build_tower, cross_product, normalize, recognize)
from .periodic import (PairVerdict, PeriodicSet, Status, classify_pair, enumerate_window,
                       make_periodic_set, packing_check, periodic_set_from_json)
from .tiling import QuotientGrid, emit_tiling_svg, rasterized_tiling_check
from .zeroset import (CubeEvaluation, DifferenceWitness, diffs_in_zeroset, eval_F_cube,
                      in_zero_set)

__version__ = "0.1.0"
