import sentry_sdk
from sentry_sdk.integrations.django import DjangoIntegration
from os import getenv
from pathlib import Path

from dotenv import load_dotenv

# Paths & env
BASE_DIR = Path(__file__).resolve().parents[2]
load_dotenv(BASE_DIR / ".env")


def _float(name: str, default: str) -> float:
    return float(getenv(name, default))


def _int(name: str, default: str) -> int:
    return int(getenv(name, default))


# Core
SECRET_KEY = getenv("DJANGO_SECRET_KEY", "dev-secret")
DEBUG = getenv("DJANGO_DEBUG", "True").lower() == "true"
SENTRY_DSN = getenv("SENTRY_DSN")

if SENTRY_DSN:
    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[DjangoIntegration()],
        traces_sample_rate=0.2 if not DEBUG else 1.0,
        environment="production" if not DEBUG else "development",
    )

INSTALLED_APPS = [
    "geometry.surfaces",
    "geometry.forms",
    "geometry.mobius",
    "geometry.loci",
    "geometry.flow",
    "geometry.spheres",
]

# No persistence: every artifact is written by the management commands.
DATABASES: dict = {}
USE_TZ = True
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# Numerics
LIGHTCONE_TOL = _float("LIGHTCONE_TOL", "1e-9")
LD_TOL = _float("LD_TOL", "1e-10")
DEGENERATE_TOL = _float("DEGENERATE_TOL", "1e-12")
FD_STEP_MIN = _float("FD_STEP_MIN", "1e-5")
SPHERE_EPS0 = _float("SPHERE_EPS0", "1e-3")

GRID_DEFAULT = _int("GRID_DEFAULT", "256")
LOCUS_REFINE_TOL = _float("LOCUS_REFINE_TOL", "1e-9")
LOCUS_REFINE_ITER = _int("LOCUS_REFINE_ITER", "20")

FLOW_STEP = _float("FLOW_STEP", "1e-3")
FLOW_MAX_STEPS = _int("FLOW_MAX_STEPS", "10000")
FLOW_MAX_HALVINGS = _int("FLOW_MAX_HALVINGS", "8")
BDE_ROOT_TOL = _float("BDE_ROOT_TOL", "1e-12")

VERIFY_TOL = _float("VERIFY_TOL", "1e-6")
SEARCH_MAX_DOUBLINGS = _int("SEARCH_MAX_DOUBLINGS", "30")

LORENTZ_MOBIUS_THREADS = getenv("LORENTZ_MOBIUS_THREADS")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {"plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"}},
    "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "plain"}},
    "root": {"handlers": ["console"], "level": "WARNING"},
    "loggers": {
        "geometry": {"level": getenv("GEOMETRY_LOG_LEVEL", "INFO")},
        "common": {"level": "INFO"},
    },
}
