"""Allow ``python -m confcount``."""

from .cli import main

raise SystemExit(main())
