from src.cli.router import CommandRouter
from .analysis import router as analysis_router
from .detsys import router as detsys_router
from .hormander import router as hormander_router
from .stochsys import router as stochsys_router

router = CommandRouter()

router.include_router(hormander_router)
router.include_router(detsys_router)
router.include_router(stochsys_router)
router.include_router(analysis_router)
