"""Shared plumbing for the geometry management commands."""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TextIO

from django.core.management.base import BaseCommand, CommandError

from common.conf import setting
from common.exceptions import GeometryError
from common.exporters import open_output
from geometry.surfaces.presets import resolve
from geometry.surfaces.schemas import SurfacePatch
from geometry.surfaces.services import invert_patch

log = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_CONTRACT = 2


def usage_error(flag: str, message: str) -> CommandError:
    return CommandError(f"--{flag}: {message}", returncode=EXIT_USAGE)


def contract_failure(message: str) -> CommandError:
    return CommandError(message, returncode=EXIT_CONTRACT)


def parse_grid(raw: str) -> tuple[int, int]:
    """'256' or '256x128'."""
    parts = raw.lower().split("x")
    try:
        dims = [int(p) for p in parts]
    except ValueError as e:
        raise usage_error("grid", f"expected NxM, got '{raw}'") from e
    if len(dims) == 1:
        dims *= 2
    if len(dims) != 2 or min(dims) < 2:
        raise usage_error("grid", f"expected NxM with N, M >= 2, got '{raw}'")
    return dims[0], dims[1]


@dataclass(frozen=True)
class RunConfig:
    command: str
    surface: str | None = None
    invert: bool = False
    grid: tuple[int, int] = (256, 256)
    tol: float | None = None
    out: Path | None = None
    seeds: Path | None = None

    def __post_init__(self) -> None:
        if self.tol is not None and not self.tol > 0:
            raise usage_error("tol", f"must be positive, got {self.tol}")
        if min(self.grid) < 2:
            raise usage_error("grid", f"must be at least 2x2, got {self.grid}")

    @classmethod
    def from_options(cls, command: str, options: dict[str, Any]) -> RunConfig:
        grid = options.get("grid")
        return cls(
            command=command,
            surface=options.get("surface"),
            invert=bool(options.get("invert", False)),
            grid=parse_grid(grid) if grid else cls.default_grid(),
            tol=options.get("tol"),
            out=Path(options["out"]) if options.get("out") else None,
            seeds=Path(options["seeds"]) if options.get("seeds") else None,
        )

    @staticmethod
    def default_grid() -> tuple[int, int]:
        n = int(setting("GRID_DEFAULT", 256))
        return n, n


class GeometryCommand(BaseCommand):
    """
    Base for the CLI: parse errors exit with status 1, contract violations with 2.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        fallback = parser.error

        def error(message):
            if getattr(parser, "called_from_command_line", False):
                parser.print_usage(sys.stderr)
                parser.exit(EXIT_USAGE, f"{parser.prog}: error: {message}\n")
            fallback(message)

        parser.error = error
        return parser

    def add_surface_arguments(self, parser, required: bool = True) -> None:
        parser.add_argument(
            "--surface",
            required=required,
            help="preset such as sphere:2,0,0,1, graph:saddle, plane:xy",
        )
        parser.add_argument("--invert", action="store_true", help="apply the Möbius inversion")

    def add_grid_argument(self, parser) -> None:
        n = int(setting("GRID_DEFAULT", 256))
        parser.add_argument("--grid", default=f"{n}x{n}", help=f"NxM (default {n}x{n})")

    def add_out_argument(self, parser, required: bool = False) -> None:
        parser.add_argument("--out", required=required, help="output file (default stdout)")

    def config(self, options: dict[str, Any]) -> RunConfig:
        return RunConfig.from_options(self.command_name(), options)

    def command_name(self) -> str:
        return type(self).__module__.rsplit(".", 1)[-1]

    def surface(self, config: RunConfig) -> SurfacePatch:
        try:
            patch = resolve(config.surface)
        except GeometryError as e:
            raise usage_error("surface", str(e)) from e
        return invert_patch(patch) if config.invert else patch

    @contextmanager
    def output(self, config: RunConfig) -> Iterator[TextIO]:
        if config.out is None:
            yield self.stdout
            return
        try:
            stream = open_output(config.out)
        except OSError as e:
            raise usage_error("out", str(e)) from e
        with stream:
            yield stream
        log.info("%s wrote %s", config.command, config.out)
