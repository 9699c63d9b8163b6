import sys

from nqcalc.cli import main

sys.exit(main())
