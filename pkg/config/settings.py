from __future__ import annotations

import os
from pathlib import Path

# General Django settings
BASE_DIR = Path(__file__).resolve(strict=True).parent.parent
DEBUG = bool(int(os.environ.get("DEBUG", default=0)))
SECRET_KEY = os.environ.get("SECRET_KEY", default="supercut-has-no-sessions")

# There's no database, the app only uses Django for settings, checks and commands.
DATABASES: dict[str, dict[str, str]] = {}

# Installed app settings
INSTALLED_APPS = [
    "supercut",
]

# Logging settings
SUPERCUT_LOG_LEVEL = os.environ.get("SUPERCUT_LOG_LEVEL", default="INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "{asctime} {levelname} {name}: {message}", "style": "{"},
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "plain",
        }
    },
    "loggers": {
        "django": {"level": "INFO", "handlers": ["console"]},
        "supercut": {
            "level": SUPERCUT_LOG_LEVEL,
            "handlers": ["console"],
            "propagate": False,
        },
    },
}

# Localization settings
TIME_ZONE = "UTC"
USE_TZ = True

# Space separated `host:port[*slots]` entries, e.g. "10.0.0.2:7070*2 10.0.0.3:7070".
# When set, these replace the remote workers of every benchmark config.
SUPERCUT_REMOTE_WORKERS = os.environ.get("SUPERCUT_REMOTE_WORKERS", default="").split()

# Benchmark defaults, a config file only has to list what it changes.
SUPERCUT = {
    # Fixed-point lambda values, spaced roughly logarithmically (factor sqrt(2)).
    "LAMBDA_SCHEDULE": [1, 2, 3, 4, 6, 8, 11, 16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512, 724, 1024],
    "LAMBDA_SCHEDULE_HALVED": [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024],
    # Real valued weights get multiplied by this and rounded half up.
    "WEIGHT_SCALE": 2**16,
    # The synthetic generator uses a smaller scale so that the finite capacities
    # of a whole image stay below CAP_MAX.
    "SYNTHETIC_WEIGHT_SCALE": 64,
    "SEEDS_PER_SUPERGRAPH": 2,
    "SEED_COUNT": 178,
    # (rows, columns) of the regular foreground seed grid.
    "SEED_GRID": [13, 14],
    "IMAGE_WIDTH": 32,
    "IMAGE_HEIGHT": 32,
    "IMAGES": 1,
    "POLICY": "dynamic",
    "MODE": "supergraph",
    "USE_SWAP": True,
    "PAD_HEIGHTS": False,
    "RNG_SEED": 0,
    "OUTPUT_DIR": str(BASE_DIR / "output"),
    # Seconds.
    "RPC_TIMEOUT": 120.0,
    # Frames above this are rejected before reading the body (256 MB).
    "MAX_FRAME_BYTES": 256 * 1024 * 1024,
    "MAX_CONCURRENT": 2,
    "SOLVER_THREADS": 1,
    "WORKERS": [
        {"kind": "local", "slots": 1},
        {"kind": "local", "slots": 1},
    ],
}
