"""python -m divisorlab forwards to the divlab command line."""

import sys

from .cli import main

sys.exit(main())
