import sys

from branchmap.cli import main

sys.exit(main())
