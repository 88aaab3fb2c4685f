import sys

from nwbound.main import main

sys.exit(main())
