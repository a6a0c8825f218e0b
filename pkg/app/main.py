# app/main.py
import logging
from typing import Annotated

import typer

from .cli.commands import analyze, artin, diagonalize, ginverse, oracle_smith, solve
from .config import get_settings

cli = typer.Typer(
    name="local-smith",
    help="Local Smith form, generalized inverse and Artin approximation of L(ε) at ε = 0.",
    no_args_is_help=True,
    add_completion=False,
)


@cli.callback()
def configure(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log at INFO level")] = False,
) -> None:
    level = "INFO" if verbose else get_settings().log_level
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")


# Register commands
cli.command(name="analyze")(analyze.analyze)
cli.command(name="diagonalize")(diagonalize.diagonalize)
cli.command(name="ginverse")(ginverse.ginverse)
cli.command(name="solve")(solve.solve)
cli.command(name="artin")(artin.artin)
cli.command(name="oracle-smith")(oracle_smith.oracle_smith)


if __name__ == "__main__":
    cli()
