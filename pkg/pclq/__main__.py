"""Allow ``python -m pclq``."""

import sys

from pclq.cli import main

sys.exit(main())
