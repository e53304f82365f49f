from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from app.config import get_settings
from app.api.health import router as health_router
from app.api.tokenizer import router as tokenizer_router
from app.core import (
    BRepError,
    brep_exception_handler,
    configure_logging,
    general_exception_handler,
    http_exception_handler,
)
from app.schema.document import SCHEMA_VERSION
from app.tokens.vocabulary import VOCAB_VERSION

settings = get_settings()

# Colorized console logging for development, JSON for production
logger = configure_logging(
    service_name=settings.APP_NAME,
    log_level="INFO" if settings.is_production else settings.LOG_LEVEL,
    format_type="json" if settings.is_production else settings.LOG_FORMAT,
)

app = FastAPI(
    title=settings.APP_NAME,
    version=settings.APP_VERSION,
    description=settings.APP_DESCRIPTION
)

# Store logger in app state for access in exception handlers
app.state.logger = logger

app.add_exception_handler(HTTPException, http_exception_handler)
app.add_exception_handler(BRepError, brep_exception_handler)
app.add_exception_handler(Exception, general_exception_handler)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(health_router, prefix="/health", tags=["health"])
app.include_router(tokenizer_router, prefix="/tokens", tags=["tokens"])

@app.on_event("startup")
async def startup_event():
    logger.info(
        f"Starting {settings.APP_NAME} v{settings.APP_VERSION} in {settings.ENV} environment"
    )

@app.get("/")
def read_root():
    """Service name and the versions of its wire formats."""
    logger.info("Root endpoint accessed")
    return {
        "message": f"Welcome to {settings.APP_NAME}!",
        "version": settings.APP_VERSION,
        "schema_version": SCHEMA_VERSION,
        "vocabulary_version": VOCAB_VERSION,
    }
