# flake8: noqa
"""Django project used only to run the test-suite of overheadlab."""
import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

INSTALLED_APPS = [
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "overheadlab",
]

SECRET_KEY = "only-used-for-running-tests"
DEBUG = False
ALLOWED_HOSTS = ["*"]
ROOT_URLCONF = "testlab.urls"
USE_TZ = True
TIME_ZONE = "UTC"
DEFAULT_AUTO_FIELD = "django.db.models.AutoField"

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.path.join(BASE_DIR, "testlab.sqlite3"),
    },
}

# Celery configuration
# tasks run eagerly inside the test process
CELERY_BROKER_URL = "memory://"
CELERY_TASK_ALWAYS_EAGER = True
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_RESULT_BACKEND = "cache+memory://"

# overheadlab settings
OVERHEADLAB_OUTPUT_DIR = os.path.join(BASE_DIR, "overheadlab-output")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "[%(asctime)s] %(levelname)s [%(name)s:%(lineno)s] %(message)s",
            "datefmt": "%d/%b/%Y %H:%M:%S",
        },
        "simple": {"format": "%(levelname)s %(message)s"},
    },
    "handlers": {
        "log_file": {
            "level": "INFO",
            "class": "logging.handlers.RotatingFileHandler",
            "filename": os.path.join(BASE_DIR, "overheadlab.log"),
            "formatter": "verbose",
            "maxBytes": 1024 * 1024 * 5,
            "backupCount": 5,
        },
        "console": {
            "level": "WARN",
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "overheadlab": {
            "handlers": ["log_file", "console"],
            "level": "INFO",
        },
        "django": {
            "handlers": ["log_file", "console"],
            "level": "ERROR",
        },
    },
}
