"""
Base settings for the groupmap project.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = config("SECRET_KEY", default="groupmap-local-only")

DEBUG = config("DEBUG", default=False, cast=bool)

# Application definition
LOCAL_APPS = [
    "apps.core",
    "apps.lattice",
    "apps.mrf",
    "apps.forward",
    "apps.infer",
    "apps.preproc",
    "apps.bench",
]

INSTALLED_APPS = LOCAL_APPS

# No relational storage: datasets and results live on disk as map files.
DATABASES = {}

# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

# Logging
LOG_LEVEL = config("LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "apps": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

# Celery
CELERY_BROKER_URL = config("REDIS_URL", default="redis://localhost:6379/0")
CELERY_RESULT_BACKEND = config("REDIS_URL", default="redis://localhost:6379/0")
CELERY_ACCEPT_CONTENT = ["json"]
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_ALWAYS_EAGER = config("CELERY_TASK_ALWAYS_EAGER", default=False, cast=bool)

# MRF simulation and estimation
GROUPMAP_GIBBS_SWEEPS = config("GROUPMAP_GIBBS_SWEEPS", default=100, cast=int)
GROUPMAP_BETA_MAX = config("GROUPMAP_BETA_MAX", default=10.0, cast=float)
GROUPMAP_BETA_TOL = config("GROUPMAP_BETA_TOL", default=1e-4, cast=float)

# Forward model
GROUPMAP_EPSILON_MODEL_II = config("GROUPMAP_EPSILON_MODEL_II", default=0.01, cast=float)

# Inference
GROUPMAP_PI_FLOOR = config("GROUPMAP_PI_FLOOR", default=1e-8, cast=float)
GROUPMAP_EPSILON_MIN = config("GROUPMAP_EPSILON_MIN", default=1e-6, cast=float)
GROUPMAP_EPSILON_MAX = config("GROUPMAP_EPSILON_MAX", default=0.5, cast=float)
GROUPMAP_VB_MAX_ITER = config("GROUPMAP_VB_MAX_ITER", default=200, cast=int)
GROUPMAP_VB_TOL = config("GROUPMAP_VB_TOL", default=1e-6, cast=float)
GROUPMAP_ICM_MAX_ITER = config("GROUPMAP_ICM_MAX_ITER", default=100, cast=int)

# Pre-processing
GROUPMAP_IMED_SIGMA = config("GROUPMAP_IMED_SIGMA", default=1.0, cast=float)
GROUPMAP_IMED_DIRECT_MAX_VOXELS = config(
    "GROUPMAP_IMED_DIRECT_MAX_VOXELS", default=4096, cast=int
)
GROUPMAP_FDR_Q = config("GROUPMAP_FDR_Q", default=0.05, cast=float)
GROUPMAP_CPV = config("GROUPMAP_CPV", default=0.95, cast=float)

# Benchmark grid: "inline" or "celery"
GROUPMAP_BENCH_EXECUTOR = config("GROUPMAP_BENCH_EXECUTOR", default="inline")
