import sys

from jamshield.cli import main

sys.exit(main())
