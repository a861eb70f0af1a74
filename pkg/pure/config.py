import sys
from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict
from loguru import logger


class Settings(BaseSettings):
    eps: float = 100.0
    min_samples: int = 3
    iou_threshold: float = 0.5
    t_runs: int = 20
    seed: int = 0
    image_width: int = 1280
    image_height: int = 720
    client_origin: str = "*"
    logging_level: str = "INFO"
    log_file: str | None = None
    log_retention: str = "1 day"

    model_config = SettingsConfigDict(
        env_prefix="PURE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


@lru_cache()
def get_settings():
    return Settings()

settings = get_settings()


class LoguruLogConfig:
    """Logging configuration for the CLI and the HTTP service"""

    LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {module}.{function}:{line} | {message}"
    FILE_LOG_FORMAT = "{time:%d/%m/%Y at %H:%M:%S} | {level} | {module}.{function}:{line} | {message}"

    def __init__(self, level: str | None = None, log_file: str | None = None):
        self.log_level = (level or settings.logging_level).upper()
        self.log_file = log_file if log_file is not None else settings.log_file
        self.log_retention = settings.log_retention

    def configure(self):
        # Replace loguru's default sink so records are not emitted twice
        logger.remove()
        logger.add(
            sink=sys.stderr,
            level=self.log_level,
            format=self.LOG_FORMAT,
        )
        if self.log_file:
            logger.add(
                sink=self.log_file,
                level=self.log_level,
                format=self.FILE_LOG_FORMAT,
                retention=self.log_retention,
            )
