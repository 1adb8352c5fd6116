from .base import *

DEBUG = True
LOGGING["loggers"]["geometry"]["level"] = getenv("GEOMETRY_LOG_LEVEL", "DEBUG")
