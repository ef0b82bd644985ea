"""Base abstract models for the capacity toolkit.

Persisted suite runs and reports inherit from these: timestamps for the
history view in the admin, and validation on every save so a report with a
non-finite capacity or an inconsistent verdict never reaches the database.
"""

from django.db import models
from django.utils.text import camel_case_to_spaces


class TimestampedModel(models.Model):
    """Abstract model providing automatic timestamp tracking.

    Attributes:
        created_at (DateTimeField): Set once when the row is first saved.
        updated_at (DateTimeField): Refreshed on every save.
    """

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        abstract = True


class ValidatedModel(models.Model):
    """Abstract model enforcing full validation on save.

    Runs ``full_clean()`` before every ``save()`` so field validators and the
    model's own ``clean()`` always execute. Concrete subclasses also get a
    readable verbose name derived from the class name ("SuiteRun" becomes
    "suite run").

    Example:
        >>> class Report(ValidatedModel):
        ...     capacity = models.FloatField()
        ...
        ...     def clean(self):
        ...         if not math.isfinite(self.capacity):
        ...             raise ValidationError("Capacity must be finite")

        >>> Report(capacity=float("nan")).save()  # ValidationError
    """

    class Meta:
        abstract = True

    def __init_subclass__(cls, **kwargs):
        """Set verbose names for concrete subclasses from their CamelCase names."""
        super().__init_subclass__(**kwargs)
        if hasattr(cls, '_meta') and not cls._meta.abstract:
            meta = cls._meta
            if meta.verbose_name == meta.object_name.lower().replace('_', ' '):
                meta.verbose_name = camel_case_to_spaces(cls.__name__)

    def save(self, *args, **kwargs):
        """Save the instance after running ``full_clean()``.

        Raises:
            ValidationError: If any field or model-level validation fails.
        """
        self.full_clean()
        return super().save(*args, **kwargs)
