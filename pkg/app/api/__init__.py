from .health import router as health_router
from .tokenizer import router as tokenizer_router
