"""Exact p-adic arithmetic for symmetric powers of CM modular forms at
supersingular primes: Iwasawa-algebra elements, plus/minus logarithms,
Kubota-Leopoldt elements, the sign-matrix assembly of mixed and admissible
L-elements, and trivial-zero bookkeeping."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigMismatch,
    ConvergenceError,
    DomainError,
    IndeterminateError,
    PrecisionShortfall,
    SchemaError,
)
from .padic import CyclotomicScalar, PadicScalar  # noqa: E402
from .iwasawa import AlgebraConfig, IwasawaElement, PadicCharacter, evaluate, multiply  # noqa: E402
from .kubota import DirichletCharacter, kl_element, verify_interpolation  # noqa: E402
from .special import det_identity_check, pollack_log  # noqa: E402
from .sympower import build_context, structure_report  # noqa: E402
from .lfactory import (  # noqa: E402
    SignVector,
    assemble_admissible,
    assemble_mixed,
    decomposition_check,
    e_admissible,
    random_components,
    sign_matrix,
)
from .zeros import leading_term, locate_trivial_zeros, vanishing_order, zero_report  # noqa: E402
