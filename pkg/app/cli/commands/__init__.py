from . import analyze, artin, diagonalize, ginverse, oracle_smith, solve

__all__ = ["analyze", "artin", "diagonalize", "ginverse", "oracle_smith", "solve"]
