"""Kernel backend selection.

The compiled extension is used when it was built for this interpreter;
otherwise the numpy implementations take over.  Both expose the same
functions with identical numerical behaviour.
"""
try:
    from relaycast._kernel import gf256_eliminate, simplex_phase

    BACKEND = "compiled"
except ImportError:  # extension not built; pure fallback
    from relaycast._kernel_py import gf256_eliminate, simplex_phase

    BACKEND = "python"

__all__ = ["simplex_phase", "gf256_eliminate", "BACKEND"]
