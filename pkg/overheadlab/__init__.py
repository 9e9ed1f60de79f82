default_app_config = "overheadlab.apps.OverheadLabConfig"

__version__ = "0.1.0"
__title__ = "Overhead Lab"
