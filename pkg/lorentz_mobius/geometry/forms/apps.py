from django.apps import AppConfig


class FormsConfig(AppConfig):
    name = "geometry.forms"
    label = "forms"
    verbose_name = "Fundamental forms"
