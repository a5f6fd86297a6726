import sys
from pathlib import Path

# Make the sibling oracle/fixture helper modules importable from any test.
sys.path.insert(0, str(Path(__file__).resolve().parent))
