# cccp/__main__.py
# SPDX-License-Identifier: Apache-2.0
from cccp.cli import main

raise SystemExit(main())
