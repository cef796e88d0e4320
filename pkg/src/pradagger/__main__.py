import sys

from pradagger.cli import main

sys.exit(main())
