import logging

from common.commands import GeometryCommand, contract_failure
from common.conf import setting
from common.exceptions import GeometryError
from common.exporters import write_csv
from geometry.mobius.services import bde_scaling_factor, verify_pushforward
from geometry.surfaces.services import invert_patch

log = logging.getLogger(__name__)

HEADER = ["u", "v", "rho", "max_rel_err", "lambda_err"]


class Command(GeometryCommand):
    help = (
        "Compares the closed-form pushforward of the fundamental forms with a direct "
        "computation on the inverted surface."
    )

    def add_arguments(self, parser):
        self.add_surface_arguments(parser)
        parser.add_argument("--grid", default="16x16", help="sample points, NxM (default 16x16)")
        parser.add_argument("--tol", type=float, default=float(setting("VERIFY_TOL", 1e-6)))
        self.add_out_argument(parser)

    def handle(self, *args, **options):
        config = self.config(options)
        patch = self.surface(config)
        image = invert_patch(patch)
        nu, nv = config.grid
        U, V = patch.domain.centers(nu, nv)

        table, worst, skipped = [], 0.0, 0
        for u, v in zip(U.ravel(), V.ravel()):
            u, v = float(u), float(v)
            try:
                report = verify_pushforward(patch, u, v, image)
                lam = bde_scaling_factor(patch, u, v, image)
            except GeometryError as e:
                log.debug("Skipping (%g, %g): %s", u, v, e)
                skipped += 1
                continue
            expected = report.rho**-5
            lambda_err = abs(lam - expected) / abs(expected)
            worst = max(worst, report.max_rel_err, lambda_err)
            table.append((u, v, report.rho, report.max_rel_err, lambda_err))

        with self.output(config) as stream:
            write_csv(stream, HEADER, table)

        log.info("%s: %d points checked, %d skipped, worst %.3e", patch, len(table), skipped, worst)
        if not table:
            raise contract_failure(f"no admissible sample point on {patch}")
        if worst > config.tol:
            raise contract_failure(f"relative error {worst:.3e} exceeds {config.tol:g}")
