from .base import DEFAULT_TUTORIAL_MS, PICKUP_RADIUS, GameMachine, Zone
from .cashier import CashierGame, Denomination, minimal_change
from .dimsum import DimSumGame
from .steamer import SteamerGame

__all__ = [
    "DEFAULT_TUTORIAL_MS",
    "PICKUP_RADIUS",
    "GameMachine",
    "Zone",
    "CashierGame",
    "Denomination",
    "minimal_change",
    "DimSumGame",
    "SteamerGame",
]
