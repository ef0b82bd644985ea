from django.apps import AppConfig


class RadialConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "radial"
    verbose_name = "Radial capacity"
