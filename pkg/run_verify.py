"""
Full verification script - runs every suite over the whole q grid.
Writes the combined report to output/verification_report.json.
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from main import main

if __name__ == "__main__":
    print("\n" + "="*60)
    print("FULL VERIFICATION MODE")
    print("="*60)
    print("\nThis will run ALL verification suites:")
    print("  • Exact identities at q = 1/2 and q = 2/3")
    print("  • Transform tables for all four kinds at q = 0.3, 0.5, 0.7")
    print("  • Derivative and multiplication theorem closure")
    print("  • Report: output/verification_report.json")
    print("\n" + "="*60 + "\n")

    report_path = Path(__file__).parent / "output" / "verification_report.json"
    sys.exit(main(["verify", "all", "--full", "--verbose", "--debug", "--out", str(report_path)]))
