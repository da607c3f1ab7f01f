from horizon.lib import cache, exceptions, log, schema, serialization, settings, worker

__all__ = ["cache", "exceptions", "log", "schema", "serialization", "settings", "worker"]
