"""Exact and truncated-series checks of denominator identities for the
periplectic Lie superalgebra p(n)."""
from .errors import (
    AntiInvarianceViolation,
    CutoffTooTight,
    DimensionMismatch,
    IndivisibleDenominator,
    NonExpandableFactor,
    PeridenoError,
)
from .lattice import GradingVector, LaurentPoly, Permutation
from .roots import Borel, Part, RootDatum, Signing, make_root_datum
from .verify import (
    CharForm,
    OddChoice,
    Strategy,
    Verdict,
    VerificationReport,
    scan_other_borels,
    verify_char_versions,
    verify_kac_euler,
    verify_thick,
    verify_thin_chain,
    verify_thin_th1,
)

__version__ = "0.1.0"
