"""Two-party nonlocal games: exact classical values, Bell-pair strategies and a seeded referee."""
from nlgames.kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
