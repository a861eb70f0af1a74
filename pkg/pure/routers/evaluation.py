from fastapi import APIRouter, status
from pure.core.detmetrics import evaluate
from pure.exceptions import PureError
from pure.models.evaluation import EvaluateRequest, EvaluationRecord
from pure.utils.http import raise_http_error

router = APIRouter()


@router.post("/", response_model=EvaluationRecord, status_code=status.HTTP_200_OK, summary="Evaluate detections")
async def evaluate_image(request: EvaluateRequest):
    """Match boxes to ground truth and compute IoU-thresholded metrics."""
    try:
        return evaluate(
            request.predictions,
            request.truths,
            t=request.iou_threshold,
            class_aware=request.class_aware,
            prediction_labels=request.prediction_labels,
        )
    except PureError as exc:
        raise_http_error(exc)
