import logging

import numpy as np

from common.commands import GeometryCommand
from common.enums import LocusKind
from common.exporters import write_csv
from geometry.loci.services import locus

log = logging.getLogger(__name__)

FIELDS = {
    "ld": LocusKind.LD,
    "lpl": LocusKind.LPL,
    "parabolic": LocusKind.PARABOLIC,
}


class Command(GeometryCommand):
    help = "Extracts the LD, LPL or parabolic curves of a surface as CSV polylines."

    def add_arguments(self, parser):
        self.add_surface_arguments(parser)
        parser.add_argument("--field", required=True, choices=sorted(FIELDS))
        self.add_grid_argument(parser)
        parser.add_argument(
            "--refine-tol",
            type=float,
            default=None,
            dest="tol",
            help="absolute zero tolerance (default 1e-9 times the grid's max |field|)",
        )
        self.add_out_argument(parser)

    def handle(self, *args, **options):
        config = self.config(options)
        patch = self.surface(config)
        nu, nv = config.grid
        curves = locus(patch, FIELDS[options["field"]], nu, nv, config.tol)

        def rows():
            for curve_id, curve in enumerate(curves):
                ambient = curve.ambient(patch)
                for (u, v), x in zip(curve.points, ambient):
                    if np.all(np.isfinite(x)):
                        yield (curve_id, u, v, *x)

        with self.output(config) as stream:
            write_csv(stream, ["curve_id", "u", "v", "x0", "x1", "x2"], rows())
        log.info("%s: %d %s curve(s)", patch, len(curves), options["field"])
