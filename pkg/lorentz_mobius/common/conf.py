from typing import Any

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


def setting(name: str, default: Any) -> Any:
    """Read a numeric default from Django settings; fall back when settings are not configured."""
    try:
        return getattr(settings, name, default)
    except ImproperlyConfigured:
        return default
