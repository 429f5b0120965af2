from qtilt.logger import Loggers

from qtilt.loggers.noop_logger import NoopLogger
from qtilt.loggers.stderr_logger import StderrLogger


logger_mapping = {
    Loggers.NOOP: NoopLogger,
    Loggers.STDERR: StderrLogger
}


def build_logger(backend, logger_kwargs=None):
    if isinstance(backend, str):
        backend = Loggers[backend.upper()]

    return logger_mapping[backend](logger_kwargs=logger_kwargs)
