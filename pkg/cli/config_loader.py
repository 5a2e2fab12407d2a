"""
Configuration loader for simulation runs
"""
import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from utilities.errors import ConfigError
from .config_schema import RunConfig

DEFAULT_CONFIG = Path(__file__).parent.parent / "config" / "benchmark.json"


def parse_override(assignment: str):
    """
    Split 'section.key=value' into (['section', 'key'], value)

    The value is parsed as JSON, falling back to the raw string.
    """
    if "=" not in assignment:
        raise ConfigError(f"Override '{assignment}' is not of the form key.path=value")
    key, raw = assignment.split("=", 1)
    path = [part for part in key.strip().split(".") if part]
    if not path:
        raise ConfigError(f"Override '{assignment}' has an empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path, value


def format_validation_error(error: ValidationError) -> str:
    """One 'section.key: message' line per failed field"""
    lines = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        lines.append(f"{location}: {item['msg']}")
    return "\n".join(lines)


class ConfigLoader:
    """Load, override and validate a run configuration"""

    def __init__(self, config_path: Optional[str] = None, overrides: Sequence[str] = ()):
        """
        Initialize config loader

        Args:
            config_path: Path to configuration file. If None, uses the benchmark file.
            overrides: 'section.key=value' assignments applied after loading
        """
        self.config_path = Path(config_path) if config_path is not None else DEFAULT_CONFIG
        self.raw = self._load_config()
        for assignment in overrides:
            self.apply_override(assignment)
        self.config = self.validate()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from JSON file"""
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError("Configuration file not found", path=str(self.config_path))
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"Invalid JSON (column {e.colno}): {e.msg}", path=str(self.config_path), line=e.lineno
            )
        if not isinstance(data, dict):
            raise ConfigError("Top level must be a JSON object", path=str(self.config_path))
        return data

    def apply_override(self, assignment: str):
        """Set one nested key from a 'section.key=value' assignment"""
        path, value = parse_override(assignment)
        node = self.raw
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"Override '{assignment}': '{part}' is not a section")
            node = child
        node[path[-1]] = value

    def validate(self) -> RunConfig:
        """Validate the merged tree against the schema"""
        try:
            return RunConfig.model_validate(self.raw)
        except ValidationError as e:
            raise ConfigError(format_validation_error(e), path=str(self.config_path))

    def get_section(self, name: str):
        """Validated section by name"""
        if name not in RunConfig.model_fields:
            raise ConfigError(f"Unknown section '{name}'. Available: {list(RunConfig.model_fields)}")
        return getattr(self.config, name)
