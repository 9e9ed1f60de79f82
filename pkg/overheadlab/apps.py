from django.apps import AppConfig

from . import __title__, __version__


class OverheadLabConfig(AppConfig):
    name = "overheadlab"
    label = "overheadlab"
    verbose_name = "%s v%s" % (__title__, __version__)
    default_auto_field = "django.db.models.AutoField"
