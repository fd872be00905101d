"""Application entry point.

Forwards to the CLI in the Presentation Layer:

    python main.py report manifold.json
    python -m presentation.cli.main report manifold.json
"""

import sys

from presentation.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
