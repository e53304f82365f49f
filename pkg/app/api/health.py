from fastapi import APIRouter

from app.config import get_settings

router = APIRouter()

@router.get("")
async def health_check():
    """
    Health check endpoint for liveness and readiness checks.

    Returns:
        dict: Status information with service name
    """
    return {"status": "ok", "service": get_settings().APP_NAME}
