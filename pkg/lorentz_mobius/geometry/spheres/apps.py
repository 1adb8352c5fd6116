from django.apps import AppConfig


class SpheresConfig(AppConfig):
    name = "geometry.spheres"
    label = "spheres"
    verbose_name = "Inverted spheres / Ovaloids"
