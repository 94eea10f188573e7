"""
Configuration for lamekit
"""

from .settings import LamekitSettings, get_settings, load_settings

__all__ = ["LamekitSettings", "get_settings", "load_settings"]
