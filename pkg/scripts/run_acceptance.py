"""Run the nine acceptance criteria and print one PASS/FAIL line each; exit 1 if any fails."""
import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parent.parent
sys.exit(subprocess.call([sys.executable, str(root / "tests" / "test_acceptance.py")], cwd=root))
