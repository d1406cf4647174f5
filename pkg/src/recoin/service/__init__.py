from .app import ApiConfig, build_app, create_app

__all__ = ["ApiConfig", "build_app", "create_app"]
