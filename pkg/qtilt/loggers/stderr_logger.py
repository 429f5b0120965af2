from datetime import datetime
from pprint import pprint

from qtilt.logger import Logger

import json
import sys


class StderrLogger(Logger):
    """One JSON event per line on stderr; stdout is left to command output."""

    def __init__(self, logger_kwargs=None):
        super().__init__(logger_kwargs=logger_kwargs)

        self.stream = self.config.get("stream") or sys.stderr
        self.debug = self.config.get("debug", False)
        self.event_whitelist = self.config.get("event_whitelist")

    def log_event(self, event_key, data=None):
        if self.event_whitelist is not None and event_key not in self.event_whitelist:
            return None

        event = {
            "event_key": event_key,
            "data": data,
            "timestamp": datetime.utcnow().isoformat()
        }

        if self.debug:
            pprint(event, stream=self.stream)
        else:
            self.stream.write(json.dumps(event, sort_keys=True, default=str) + "\n")

    def log_metric(self, key, value, step=0):
        self.log_event("METRIC", {"key": key, "value": value, "step": step})
