from django.apps import AppConfig


class SurfacesConfig(AppConfig):
    name = "geometry.surfaces"
    label = "surfaces"
    verbose_name = "Parametric surfaces / Surface patches"
