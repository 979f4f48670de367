from fastapi import APIRouter, HTTPException, status

from .cli import execute
from .config import get_settings
from .models import CommandRequest, Report, RunConfig, Status

# Initialize router
semantics_router = APIRouter(tags=["semantics"])


def _run_command(command: str, request: CommandRequest) -> Report:
    settings = get_settings()
    cfg = RunConfig(
        command=command,
        program=request.program,
        source="<request>",
        env=request.env,
        abenv=request.abenv,
        post=request.post,
        fuel=settings.fuel if request.fuel is None else request.fuel,
        samples=settings.samples if request.samples is None else request.samples,
        seed=settings.seed if request.seed is None else request.seed,
        format="json",
        verify=request.verify,
    )
    report = execute(cfg)
    if report.status == Status.INVALID_INPUT:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=report.message,
        )
    return report


@semantics_router.post("/run", response_model=Report, response_model_exclude_none=True)
async def run_program(request: CommandRequest):
    return _run_command("run", request)


@semantics_router.post("/vcg", response_model=Report, response_model_exclude_none=True)
async def generate_conditions(request: CommandRequest):
    return _run_command("vcg", request)


@semantics_router.post("/absint", response_model=Report, response_model_exclude_none=True)
async def analyze_program(request: CommandRequest):
    return _run_command("absint", request)


@semantics_router.post("/check", response_model=Report, response_model_exclude_none=True)
async def check_annotations(request: CommandRequest):
    return _run_command("check", request)
