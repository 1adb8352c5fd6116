import logging

from common.commands import GeometryCommand, contract_failure, usage_error
from common.exporters import dump_json
from geometry.spheres.services import (
    NonconvexWitness,
    SearchExhausted,
    enclosing_radius,
    translation_search,
    translation_sufficient,
)

log = logging.getLogger(__name__)


class Command(GeometryCommand):
    help = "Finds a translation after which the Möbius image of an ovaloid is an ovaloid."

    def add_arguments(self, parser):
        self.add_surface_arguments(parser)
        parser.add_argument("--sample-n", type=int, default=16, dest="sample_n")
        parser.add_argument("--grid", default="128x128", help="verification census grid")
        self.add_out_argument(parser)

    def handle(self, *args, **options):
        config = self.config(options)
        if options["sample_n"] < 16:
            raise usage_error("sample-n", f"must be at least 16, got {options['sample_n']}")
        patch = self.surface(config)
        try:
            R = enclosing_radius(patch, options["sample_n"])
            t = translation_search(patch, options["sample_n"], radius=R)
        except (NonconvexWitness, SearchExhausted) as e:
            raise contract_failure(str(e)) from e

        verified = translation_sufficient(patch, t, *config.grid)
        with self.output(config) as stream:
            stream.write(dump_json({"R": R, "translation": list(t), "verified": verified}))
        if not verified:
            raise contract_failure(f"translation {list(t)} fails the parabolic census on {patch}")
