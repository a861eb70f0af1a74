import time
from typing import Any, Callable, TypeVar
from fastapi import Request, Response
from loguru import logger

F = TypeVar("F", bound=Callable[..., Any])

async def log_middleware(request: Request, call_next: F) -> Response:
    start_time = time.perf_counter()
    response = await call_next(request)
    elapsed = time.perf_counter() - start_time
    response.headers["X-Process-Time"] = f"{elapsed:.4f}"

    logger.info(
        "{method} {path} | status_code: {status_code} | body: {size} bytes | {elapsed_ms:.1f} ms",
        method=request.method,
        path=request.url.path,
        status_code=response.status_code,
        size=request.headers.get("content-length", "0"),
        elapsed_ms=elapsed * 1000,
    )

    return response
