# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

PACKAGE = "mg1tail"
ID = "MG1"
VERSION = "0.1.0"
