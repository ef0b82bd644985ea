"""Worker-process initializer, importable before Django is set up."""

import os


def init_worker():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "capacity_lab.settings")
    import django  # pylint: disable=import-outside-toplevel

    django.setup()
