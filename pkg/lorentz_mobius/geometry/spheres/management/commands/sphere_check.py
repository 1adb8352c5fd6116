from common.commands import GeometryCommand, usage_error
from common.exceptions import GeometryError
from common.exporters import dump_json
from geometry.spheres.schemas import SphereSpec
from geometry.spheres.services import (
    dist_to_lightcone,
    f_cos_roots,
    is_closed_after_inversion,
    is_ovaloid_inverted_sphere,
    ovaloid_check,
)
from geometry.surfaces.presets import parse_vector


class Command(GeometryCommand):
    help = "Reports closedness and convexity of the Möbius image of a Euclidean sphere."

    def add_arguments(self, parser):
        parser.add_argument("--center", required=True, help="a,b,c")
        parser.add_argument("--radius", required=True, type=float)
        parser.add_argument("--grid", default="128x128", help="census grid per chart")
        self.add_out_argument(parser)

    def handle(self, *args, **options):
        config = self.config(options)
        try:
            center = parse_vector(options["center"])
        except GeometryError as e:
            raise usage_error("center", str(e)) from e
        try:
            s = SphereSpec.of(center, options["radius"])
        except GeometryError as e:
            raise usage_error("radius", str(e)) from e

        census = ovaloid_check(s, *config.grid)
        payload = {
            "center": center,
            "radius": s.r,
            "dist_to_lc": dist_to_lightcone(center),
            "is_closed": is_closed_after_inversion(s),
            "is_ovaloid": is_ovaloid_inverted_sphere(s),
            "f_roots": f_cos_roots(s),
            "parabolic_empty": census.parabolic_empty,
            "witnesses": census.witnesses,
        }
        with self.output(config) as stream:
            stream.write(dump_json(payload))
