from fastapi import APIRouter, status
from pure.core.simulator import generate_scene, simulate_runs
from pure.exceptions import PureError
from pure.models.simulation import SimulateRequest, SimulationResult
from pure.utils.http import raise_http_error

router = APIRouter()


@router.post("/", response_model=SimulationResult, status_code=status.HTTP_200_OK, summary="Simulate one scene")
async def simulate_scene(request: SimulateRequest):
    """Generate a ground-truth scene and its perturbed MC detection runs."""
    try:
        truths = generate_scene(request.scene, request.image_id)
        predictions = simulate_runs(truths, request.noise, request.t_runs)
    except PureError as exc:
        raise_http_error(exc)
    return SimulationResult(truths=truths, predictions=predictions)
