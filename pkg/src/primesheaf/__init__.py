"""Prime spectra of finitely generated modules over Z and F_p[x], with their structure sheaf.

The submodules are usable on their own; the names below are the common entry points.
"""
from .errors import (
    AlgebraError, AmbientMismatchError, DanglingReferenceError, GuardExceededError,
    IncompatibleSectionsError, MixedRingError, NotACoverError, PreconditionError,
    RaggedMatrixError, WorkspaceError,
)
from .fgmod import (
    FgModule, LocalizedModule, ModuleHom, Submodule, annihilator, colon, localize,
    localize_at_prime, quotient, torsion_gamma,
)
from .ring_core import ZZ, PrincipalIdeal, bezout, factor, poly_ring, radical, xgcd
from .sheaf import (
    Section, epsilon, epsilon_kernel, glue, ideal_transform, make_section, restrict, sections,
    stalk, transform_map,
)
from .spectrum import (
    InfiniteSpectrumError, OpenSet, PrimeSubmodule, basic_open, is_faithful, is_prime,
    is_primeful, is_T0, spec_p, spectrum, v_closed,
)
from .verify import check_fundamental_sequence, check_h_vanishing, run_suite, scheme_report

__version__ = "0.1.0"
