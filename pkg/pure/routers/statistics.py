from fastapi import APIRouter, status
from pure.core.stats import correlate
from pure.exceptions import PureError
from pure.models.statistics import CorrelateRequest, CorrelationResult
from pure.utils.http import raise_http_error

router = APIRouter()


@router.post("/", response_model=CorrelationResult, status_code=status.HTTP_200_OK, summary="Correlate two series")
async def correlate_series(request: CorrelateRequest):
    try:
        return correlate(request.xs, request.ys, request.method)
    except PureError as exc:
        raise_http_error(exc)
