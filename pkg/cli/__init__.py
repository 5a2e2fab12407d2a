"""
Command-line interface package
"""
from .config_loader import ConfigLoader
from .config_schema import RunConfig
from .granit_cli import main, build_parser

__all__ = ['ConfigLoader', 'RunConfig', 'main', 'build_parser']
