import sys

from fibpow.cli import main

sys.exit(main())
