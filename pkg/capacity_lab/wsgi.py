"""
WSGI config for capacity_lab project.

It exposes the WSGI callable as a module-level variable named ``application``.
Only the admin is served; it is used to browse persisted suite reports.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "capacity_lab.settings")

application = get_wsgi_application()
