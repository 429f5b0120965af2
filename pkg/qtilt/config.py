import os

import yaml
import yaml.scanner

from qtilt.utilities import QTiltError


package_config_path = os.path.join(os.path.dirname(__file__), "config", "config.yml")
user_config_path = os.path.join("config", "config.yml")


def load_config_file(file_path, required=True):
    try:
        with open(file_path, "r") as f:
            try:
                return yaml.safe_load(f) or {}
            except yaml.scanner.ScannerError:
                raise QTiltError(f"Configuration file at '{file_path}' contains invalid YAML...")
    except FileNotFoundError:
        if required:
            raise QTiltError(f"Configuration file not found at: '{file_path}'...")

        return {}


def merge_config(base, overlay):
    merged = dict(base)

    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value

    return merged


package_config = load_config_file(package_config_path)
user_config = load_config_file(user_config_path, required=False)

config = merge_config(package_config, user_config)


def cache_directory(flag_value=None):
    return os.environ.get("QTILT_CACHE") or flag_value or config["cache"]["directory"]
