from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
import logging
import uvicorn

from .config import get_settings
from .routes import semantics_router

logger = logging.getLogger(__name__)

settings = get_settings()

# Initialize FastAPI app
app = FastAPI(title="impsem API", description="Execution, verification conditions and interval analysis for a small while language")

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(semantics_router)


@app.get("/")
async def root():
    return {"message": "impsem API is running"}


@app.get("/health")
async def health_check():
    return {"status": "healthy"}


@app.exception_handler(Exception)
async def global_exception_handler(request, exc):
    logger.error(f"Unhandled error on {request.url.path}: {str(exc)}")
    return JSONResponse(
        status_code=500,
        content={"message": f"Internal server error: {str(exc)}"}
    )


def serve():
    logging.basicConfig(level=settings.log_level)
    uvicorn.run("impsem.main:app", host=settings.host, port=settings.port, reload=True)


if __name__ == "__main__":
    serve()
