"""
Lazy access to project settings.

Services call ``setting("GROUPMAP_...", default)`` so they work both inside the
Django project and as a plain library with no settings module configured.
"""

from typing import Any

from django.conf import settings


def setting(name: str, default: Any) -> Any:
    """Return a project setting, or ``default`` when settings are not configured."""
    if not settings.configured:
        return default
    return getattr(settings, name, default)
