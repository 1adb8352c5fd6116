from django.apps import AppConfig


class MobiusConfig(AppConfig):
    name = "geometry.mobius"
    label = "mobius"
    verbose_name = "Möbius inversion / Pushforward"
