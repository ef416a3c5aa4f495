"""
DialecticKernel - Command line front door

Validate finite models of non-symmetric dialectical logic, check and search proofs,
evaluate formulas in classical structures, compute reproduction fixpoints and run the law suite.
"""

import logging
import sys
from typing import Dict, Optional, Sequence

import click
from colorama import Fore, Style, init as colorama_init
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from src.config import get_settings
from src.runner import EXIT_INPUT, make_invocation, run
from src.errors import KernelError

logger = logging.getLogger(__name__)

STATUS_COLORS = {"PASS": Fore.GREEN, "OK": Fore.GREEN, "SKIP": Fore.YELLOW, "FAIL": Fore.RED,
                 "NOT": Fore.RED, "error:": Fore.RED}


def setup_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=getattr(logging, (level or get_settings().log_level).upper(), logging.WARNING),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )


def colorize(text: str) -> str:
    lines = []
    for line in text.splitlines():
        head = line.split(" ", 1)[0]
        color = STATUS_COLORS.get(head)
        lines.append(f"{color}{line}{Style.RESET_ALL}" if color else line)
    return "\n".join(lines)


def execute(command: str, inputs: Sequence[str], fmt: str, **kwargs) -> None:
    """Build the invocation, run it and exit with its code"""
    try:
        inv = make_invocation(command, list(inputs), format=fmt, **kwargs)
    except KernelError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INPUT)
    result = run(inv)
    output = result.output
    if fmt == "text" and sys.stdout.isatty():
        output = colorize(output)
    if output:
        click.echo(output, err=result.exit_code == EXIT_INPUT)
    sys.exit(result.exit_code)


def _options(**pairs) -> Dict[str, str]:
    return {k: str(v) for k, v in pairs.items() if v is not None}


format_option = click.option("--format", "fmt", type=click.Choice(["text", "tsv", "json"]), default="text",
                             show_default=True, help="Report format")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", default=None, help="Logging level (defaults to LOG_LEVEL)")
def main(log_level: Optional[str]) -> None:
    """DialecticKernel: checks for typed non-symmetric linear logic on finite models."""
    colorama_init()
    setup_logging(log_level)


@main.command()
@click.argument("model")
@click.option("--laws", "flags", default="", help="Capability laws to add: joins, meets, cHc")
@format_option
def validate(model: str, flags: str, fmt: str) -> None:
    """Check the biposet axioms of a model descriptor or model file."""
    execute("validate", [model], fmt, laws=[flags] if flags else [])


@main.command("check-proof")
@click.argument("language", type=click.Path(exists=True, dir_okay=False))
@click.argument("proof", type=click.Path(exists=True, dir_okay=False))
@format_option
def check_proof(language: str, proof: str, fmt: str) -> None:
    """Check every derivation of a proof file against the rule schemas."""
    execute("check-proof", [language, proof], fmt)


@main.command()
@click.argument("language", type=click.Path(exists=True, dir_okay=False))
@click.argument("goal", type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", type=int, default=None, help="Derivation depth bound")
@format_option
def prove(language: str, goal: str, depth: Optional[int], fmt: str) -> None:
    """Bounded backward proof search for each goal assertion."""
    execute("prove", [language, goal], fmt, depth=depth)


@main.command("eval")
@click.argument("language", type=click.Path(exists=True, dir_okay=False))
@click.argument("structure", type=click.Path(exists=True, dir_okay=False))
@click.argument("formulas", type=click.Path(exists=True, dir_okay=False))
@format_option
def evaluate(language: str, structure: str, formulas: str, fmt: str) -> None:
    """Interpret formulas and decide assertions in a classical structure."""
    execute("eval", [language, structure, formulas], fmt)


@main.command()
@click.argument("model")
@format_option
def center(model: str, fmt: str) -> None:
    """List the Boolean center of a Heyting model and validate it."""
    execute("center", [model], fmt)


@main.command()
@click.argument("model")
@click.argument("s")
@click.argument("r")
@click.option("--hom", default=None, help="Homset 'y,x' of the system terms")
@click.option("--variant", type=click.Choice(["yinyang", "yangyin", "reverse"]), default=None)
@click.option("--separator", default=None, help="Separator type (found automatically otherwise)")
@click.option("--topotype", default=None, help="'full' or a literal 'topo y: {...}' to decompose the flow over")
@format_option
def fixpoint(model: str, s: str, r: str, hom: Optional[str], variant: Optional[str], separator: Optional[str],
             topotype: Optional[str], fmt: str) -> None:
    """Least and greatest fixpoints of the reproduction operator of (s, r)."""
    execute("fixpoint", [model, s, r], fmt,
            options=_options(hom=hom, variant=variant, separator=separator, topotype=topotype))


@main.command()
@click.argument("program", type=click.Path(exists=True, dir_okay=False))
@click.option("--progress", is_flag=True, help="Show fixpoint iterations")
@format_option
def datalog(program: str, progress: bool, fmt: str) -> None:
    """Evaluate a Datalog program as a least reproduction fixpoint."""
    execute("datalog", [program], fmt, options=_options(progress="true" if progress else None))


@main.command()
@click.argument("model")
@click.option("--law", "names", multiple=True, help="Run only the named law (repeatable)")
@click.option("--depth", type=int, default=None, help="Depth bound of the soundness corpus")
@click.option("--seed", type=int, default=None, help="Seed of every randomized corpus")
@click.option("--jobs", type=int, default=None, help="Laws checked in parallel")
@format_option
def laws(model: str, names: Sequence[str], depth: Optional[int], seed: Optional[int], jobs: Optional[int],
         fmt: str) -> None:
    """Run the law suite against a model; one line per law."""
    execute("laws", [model], fmt, laws=list(names), depth=depth, seed=seed, jobs=jobs)


if __name__ == "__main__":
    main()
