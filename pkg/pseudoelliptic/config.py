import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from .errors import InvalidInput


@dataclass(frozen=True)
class Settings:
    env_mode: str
    dotenv_path: str
    log_level: str
    batch_workers: int
    embed_digits: int
    series_slack: int


def _int_setting(key, default, minimum):
    raw = os.getenv(key, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{key} must be an integer, got {raw!r}")
    if value < minimum:
        raise InvalidInput(f"{key} must be >= {minimum}, got {value}")
    return value


def load_settings():
    # Get the project root directory (parent of the package directory)
    package_dir = os.path.dirname(os.path.abspath(__file__))
    project_root = os.path.dirname(package_dir)

    env_mode = os.getenv("ENV_MODE", "local")
    dotenv_path = os.path.join(project_root, f".env.{env_mode}")
    load_dotenv(dotenv_path=dotenv_path, override=True)

    return Settings(
        env_mode=env_mode,
        dotenv_path=dotenv_path,
        log_level=os.getenv("PSEUDOELLIPTIC_LOG_LEVEL", "WARNING").upper(),
        batch_workers=_int_setting("PSEUDOELLIPTIC_BATCH_WORKERS", 1, 1),
        embed_digits=_int_setting("PSEUDOELLIPTIC_EMBED_DIGITS", 40, 15),
        series_slack=_int_setting("PSEUDOELLIPTIC_SERIES_SLACK", 3, 1),
    )


@lru_cache(maxsize=None)
def get_settings():
    return load_settings()
