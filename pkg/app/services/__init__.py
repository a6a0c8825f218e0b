"""
Services package for local-smith.
"""

from . import artin_solver, core_algebra, ginverse_smith, jordan_recursion, transform_builder

__all__ = ["core_algebra", "jordan_recursion", "transform_builder", "ginverse_smith", "artin_solver"]
