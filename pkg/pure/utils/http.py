from typing import NoReturn
from fastapi import HTTPException, status
from loguru import logger
from pure.exceptions import PureError


def raise_http_error(exc: PureError) -> NoReturn:
    """Translate a pipeline error into an HTTP error response."""
    status_code = (
        status.HTTP_422_UNPROCESSABLE_ENTITY
        if exc.exit_code == 3
        else status.HTTP_400_BAD_REQUEST
    )
    logger.warning("request rejected: {name}: {exc}", name=type(exc).__name__, exc=exc)
    raise HTTPException(status_code=status_code, detail=str(exc)) from exc
