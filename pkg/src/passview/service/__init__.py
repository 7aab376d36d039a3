"""HTTP facade exposing scenario evaluation and value-map combination."""

from .app import create_app, load_maps_dir, params_from_env

__all__ = ["create_app", "load_maps_dir", "params_from_env"]
