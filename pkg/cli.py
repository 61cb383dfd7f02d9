# Command-line entry point for the paradox reports (Table 1, Figure 1 series,
# scenario analysis, conflict zones, simulation and calibration).

import sys

from paradox.cli import main

# --- Main execution block ---
if __name__ == "__main__":
    sys.exit(main())
