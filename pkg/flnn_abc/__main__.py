# flnn_abc/__main__.py
import sys

from flnn_abc.main import main

sys.exit(main())
