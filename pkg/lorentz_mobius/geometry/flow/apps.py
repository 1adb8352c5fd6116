from django.apps import AppConfig


class FlowConfig(AppConfig):
    name = "geometry.flow"
    label = "flow"
    verbose_name = "Principal curvature lines"
