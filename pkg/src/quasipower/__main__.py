"""Allow ``python -m quasipower``."""
import sys

from .cli import main

sys.exit(main())
