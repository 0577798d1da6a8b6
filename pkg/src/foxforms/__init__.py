"""Fox calculus, bar chains and SU(n) form identities for surface-group relators."""
from foxforms.kernels import BACKEND

__version__ = "0.1.0"
