__version__ = "0.1.0"
__package__ = "gtci"

import logging
import gtci.logger
from typing_extensions import Final
import gtci.exceptions as exceptions
import gtci.zlattice as zlattice
import gtci.constellations as constellations
import gtci.torsion as torsion
import gtci.geometry as geometry
from gtci.classes import *
from gtci.pipeline import Classifier, classify, classify_async, run_fixtures

tail_cutoff = 100
"""
Default cutoff for the first entry of the unbounded exponent-tail families swept by
`constellations.enumerate_constellations`. Pass `cutoff=` to override it per call.
"""

MIN_TAIL_CUTOFF: Final[int] = 24
"""
Smallest accepted tail cutoff. Every finite tail family lies below it.
"""

MAX_WORKERS = 2
"""
Number of concurrent workers used by `classify` to process constellations.
"""

MAX_GROUP_ORDER: Final[int] = 4096
"""
Largest group order for which `torsion.automorphisms` enumerates automorphisms.
"""

OUTPUT_DIR_ENV: Final[str] = "GTCI_OUTPUT_DIR"
"""
Environment variable naming the directory the CLI writes classifications to when no `--output` is given.
"""

DEBUG_CHECK_MATRICES = False
"""
Debug flag, re-check every enumerated degree matrix with the matrix-side predicates. Slow.
"""

logger: logging.Logger = logging.getLogger("gtci")
