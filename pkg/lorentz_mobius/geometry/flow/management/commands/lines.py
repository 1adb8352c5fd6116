import csv
import logging

import numpy as np

from common.commands import GeometryCommand, contract_failure, usage_error
from common.conf import setting
from common.exporters import write_csv
from geometry.flow.services import MaskedSample, ShortLine, integrate_lines, sample_residuals
from geometry.surfaces.services import invert_patch

log = logging.getLogger(__name__)

HEADER = ["line_id", "t_index", "u", "v", "x0", "x1", "x2", "residual"]


def read_seeds(path) -> list[tuple[float, float]]:
    """Seed file: one 'u,v' pair per row; a non-numeric first row is a header."""
    seeds = []
    with open(path, newline="", encoding="utf-8") as f:
        for n, row in enumerate(csv.reader(f)):
            if not row or not "".join(row).strip():
                continue
            try:
                seeds.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as e:
                if n == 0:
                    continue
                raise usage_error("seeds", f"row {n + 1}: expected u,v, got {row}") from e
    return seeds


class Command(GeometryCommand):
    help = (
        "Integrates principal lines from seed points and checks them against the "
        "BDE of the inverted surface."
    )

    def add_arguments(self, parser):
        self.add_surface_arguments(parser)
        parser.add_argument("--seeds", required=True, help="CSV of u,v seed points")
        parser.add_argument("--branch", type=int, choices=(1, 2), default=1)
        parser.add_argument("--step", type=float, default=float(setting("FLOW_STEP", 1e-3)))
        parser.add_argument(
            "--n-steps", type=int, default=int(setting("FLOW_MAX_STEPS", 10000)), dest="n_steps"
        )
        parser.add_argument("--tol", type=float, default=float(setting("VERIFY_TOL", 1e-6)))
        self.add_out_argument(parser)

    def handle(self, *args, **options):
        config = self.config(options)
        if not options["step"] > 0:
            raise usage_error("step", f"must be positive, got {options['step']}")
        if options["n_steps"] < 1:
            raise usage_error("n-steps", f"must be at least 1, got {options['n_steps']}")
        patch = self.surface(config)
        try:
            seeds = read_seeds(config.seeds)
        except OSError as e:
            raise usage_error("seeds", str(e)) from e

        image = invert_patch(patch)
        lines = integrate_lines(patch, seeds, options["branch"], options["step"], options["n_steps"])

        table, worst = [], 0.0
        for line_id, line in enumerate(lines):
            if line is None:
                continue
            try:
                residuals = sample_residuals(patch, line, image)
            except (MaskedSample, ShortLine) as e:
                raise contract_failure(f"line {line_id}: {e}") from e
            worst = max(worst, float(np.nanmax(residuals)))
            points = line.ambient(image)
            for t, ((u, v), x, res) in enumerate(zip(line.samples, points, residuals)):
                table.append((line_id, t, u, v, *x, res))

        with self.output(config) as stream:
            write_csv(stream, HEADER, table)

        done = sum(line is not None for line in lines)
        log.info("%d of %d lines on %s, max residual %.3e", done, len(seeds), patch, worst)
        if not done:
            raise contract_failure(f"no seed of {len(seeds)} starts a principal line on {patch}")
        if worst > config.tol:
            raise contract_failure(f"max residual {worst:.3e} exceeds {config.tol:g}")
