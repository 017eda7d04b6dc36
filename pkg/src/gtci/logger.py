import logging
import sys

PREFIX = "\33[34m●\33[36m▲\33[35m▮\33[0m"

notebook = False
try:
    if get_ipython().__class__.__name__ == "ZMQInteractiveShell":  # type: ignore # noqa: F821
        notebook = True
except NameError:
    pass


class Formatter(logging.Formatter):
    def format(self, record):
        if record.levelno == logging.DEBUG:
            if notebook or not sys.stderr.isatty():
                self._style._fmt = f"{PREFIX} %(message)s"
            else:
                self._style._fmt = f"\033[K{PREFIX} %(message)s\033[F"
        elif record.levelno == logging.DEBUG + 1:
            self._style._fmt = "%(message)s"
        elif record.levelno == logging.INFO:
            self._style._fmt = f"{PREFIX} %(message)s"
        elif record.levelno == logging.WARNING:
            self._style._fmt = "\33[33m%(message)s\33[0m"
        elif record.levelno >= logging.ERROR:
            self._style._fmt = "\33[91m%(message)s\33[0m"
        return super().format(record)


formatter = Formatter()
handler = logging.StreamHandler()  # stderr; stdout is reserved for data
handler.setFormatter(formatter)

logger = logging.getLogger("gtci")
logger.addHandler(handler)
logger.setLevel(logging.INFO)


def set_verbosity(verbose: bool = False, quiet: bool = False):
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)
