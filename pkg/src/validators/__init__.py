"""Configuration validators."""
from .base import BaseValidator
from .config_validator import ConfigValidator

__all__ = ['BaseValidator', 'ConfigValidator']
