import sys

from gtci.cli import main

sys.exit(main())
