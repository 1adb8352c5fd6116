import logging

import numpy as np

from common.commands import GeometryCommand
from common.exporters import write_csv
from common.enums import Region
from common.minkowski import lightcone_tol, mobius_point, region_of

log = logging.getLogger(__name__)

HEADER = ["u", "v", "x0", "x1", "x2", "y0", "y1", "y2", "region_source", "region_image"]


class Command(GeometryCommand):
    help = "Samples a surface at cell centers and writes each point with its Möbius image."

    def add_arguments(self, parser):
        self.add_surface_arguments(parser)
        self.add_grid_argument(parser)
        self.add_out_argument(parser)

    def handle(self, *args, **options):
        config = self.config(options)
        patch = self.surface(config)
        nu, nv = config.grid
        tol = lightcone_tol()

        U, V = patch.domain.centers(nu, nv)
        inside = np.asarray(patch.mask(U, V), dtype=bool)

        def rows():
            skipped = 0
            for u, v in zip(U[inside], V[inside]):
                x = patch.position(np.float64(u), np.float64(v))
                source = region_of(x, tol)
                if source == Region.LIGHT_CONE:
                    skipped += 1
                    continue
                y = mobius_point(x, tol)
                yield (u, v, *x, *y, source.value, region_of(y, tol).value)
            if skipped:
                log.debug("Skipped %d samples on the light cone", skipped)

        with self.output(config) as stream:
            count = write_csv(stream, HEADER, rows())
        log.info("Inverted %d points of %s", count, patch)
