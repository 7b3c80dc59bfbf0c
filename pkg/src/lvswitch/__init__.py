"""Competitive Lotka-Volterra dynamics under random switching between two environments."""
from .envmodel import Environment, EnvironmentPair, SwitchRates, interval_I, interval_J, load_pair
from .errors import InputError, LVSwitchError, NumericalError
from .invasion import Outcome, classify_outcome, invasion_rate_x, invasion_rate_y

__version__ = "0.1.0"

__all__ = [
    "Environment", "EnvironmentPair", "SwitchRates", "interval_I", "interval_J", "load_pair",
    "InputError", "LVSwitchError", "NumericalError", "Outcome", "classify_outcome",
    "invasion_rate_x", "invasion_rate_y", "__version__",
]
