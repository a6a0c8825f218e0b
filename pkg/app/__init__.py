from . import cli, services

__all__ = ["cli", "services"]
