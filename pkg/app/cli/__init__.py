"""
CLI layer - input documents, reports, the shared runner and one module per command.
"""

from .documents import InputDocument, load_document
from .reports import AnalysisReport, CheckEntry, OutputFormat, render
from .runner import ExitCode

__all__ = [
    "InputDocument",
    "load_document",
    "AnalysisReport",
    "CheckEntry",
    "OutputFormat",
    "render",
    "ExitCode",
]
