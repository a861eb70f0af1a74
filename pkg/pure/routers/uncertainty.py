from fastapi import APIRouter, status
from pure.core.surface import quantify, representative_boxes
from pure.exceptions import PureError
from pure.models.uncertainty import QuantifyRequest, RepresentativeBox, UncertaintyReport
from pure.utils.http import raise_http_error

router = APIRouter()


@router.post("/", response_model=UncertaintyReport, status_code=status.HTTP_200_OK, summary="Quantify image uncertainty")
async def quantify_image(request: QuantifyRequest):
    """Cluster the MC detections of one image and return its prediction-surface uncertainty."""
    try:
        return quantify(request.predictions, request.params)
    except PureError as exc:
        raise_http_error(exc)


@router.post(
    "/representatives",
    response_model=list[RepresentativeBox],
    status_code=status.HTTP_200_OK,
    summary="Mean box per object cluster",
)
async def get_representatives(request: QuantifyRequest):
    """Component-wise mean box of every cluster."""
    try:
        return representative_boxes(quantify(request.predictions, request.params))
    except PureError as exc:
        raise_http_error(exc)
