import sys

from qglab.cli import main

sys.exit(main())
