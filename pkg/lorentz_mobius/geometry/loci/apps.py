from django.apps import AppConfig


class LociConfig(AppConfig):
    name = "geometry.loci"
    label = "loci"
    verbose_name = "LD, LPL and parabolic loci"
