import sys

from enorm.main import main

sys.exit(main())
