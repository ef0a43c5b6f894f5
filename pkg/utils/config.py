"""
Configuration management
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml
from dotenv import load_dotenv

from models.validation import Config

# Load environment variables
load_dotenv()

logger = structlog.get_logger(__name__)

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "config.yaml"

_ENV_OVERRIDES = {
    "JLOGIC_MAX_DERIVED_FACTS": ("limits", "max_derived_facts"),
    "JLOGIC_MAX_PATH_LENGTH": ("limits", "max_path_length"),
    "JLOGIC_MAX_PACK_DEPTH": ("limits", "max_pack_depth"),
    "JLOGIC_OUTPUT_MODE": ("output", "mode"),
    "JLOGIC_LOG_LEVEL": ("logging", "level"),
}


def load_config(config_path: str = "config.yaml") -> Dict[str, Any]:
    """Load configuration from YAML file"""

    config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_file, encoding="utf-8") as f:
        config = yaml.safe_load(f) or {}

    return apply_env_overrides(config)


def apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    """Override with environment variables if present"""
    for variable, (section, key) in _ENV_OVERRIDES.items():
        value = os.getenv(variable)
        if value:
            config.setdefault(section, {})[key] = value
    return config


def settings_from_dict(raw: Dict[str, Any]) -> Config:
    """Flatten the YAML sections into the Config model"""
    output = raw.get("output", {}) or {}
    logging_section = raw.get("logging", {}) or {}
    data: Dict[str, Any] = {
        "limits": raw.get("limits", {}) or {},
        "transform": raw.get("transform", {}) or {},
    }
    if "mode" in output:
        data["output_mode"] = output["mode"]
    for key in ("verdict_format", "freshen_prefix", "indent"):
        if key in output:
            data[key] = output[key]
    if "containment_extra_lengths" in (raw.get("analysis") or {}):
        data["containment_extra_lengths"] = raw["analysis"]["containment_extra_lengths"]
    if "level" in logging_section:
        data["log_level"] = str(logging_section["level"]).upper()
    if "json" in logging_section:
        data["log_json"] = logging_section["json"]
    if "seed" in (raw.get("testing") or {}):
        data["seed"] = raw["testing"]["seed"]
    return Config(**data)


def get_settings(config_path: Optional[str] = None) -> Config:
    """Validated settings; documented defaults when the file is missing"""
    path = Path(config_path) if config_path else DEFAULT_CONFIG
    try:
        raw = load_config(str(path))
    except FileNotFoundError:
        logger.info("config_defaults_used", path=str(path))
        raw = apply_env_overrides({})
    return settings_from_dict(raw)


def get_data_path(filename: str) -> Path:
    """Get path to a file of the example corpus"""
    return DEFAULT_CONFIG.parent / "data" / filename
