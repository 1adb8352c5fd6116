from common.commands import GeometryCommand, usage_error
from geometry.surfaces.exporters import export_mesh


class Command(GeometryCommand):
    help = "Writes a triangulated surface grid as Wavefront OBJ; masked cells are omitted."

    def add_arguments(self, parser):
        self.add_surface_arguments(parser)
        self.add_grid_argument(parser)
        self.add_out_argument(parser, required=True)

    def handle(self, *args, **options):
        config = self.config(options)
        patch = self.surface(config)
        nu, nv = config.grid
        try:
            mesh = export_mesh(patch, nu, nv, config.out)
        except OSError as e:
            raise usage_error("out", str(e)) from e
        self.stdout.write(
            self.style.SUCCESS(
                f"{patch}: {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles"
            )
        )
