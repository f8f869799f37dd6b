import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from core.config import get_settings

try:
    settings = get_settings()
    print(f"Log level: {settings.log_level} (file: {settings.log_file or '-'})")
    print(f"Batch workers: {settings.batch_workers}")
    print(f"Default block height: {settings.default_block_height}")
    print(f"Solver max pivots: {settings.solver.max_pivots} (Bland after {settings.solver.bland_after} degenerate pivots)")
    print(f"Precision bits: {settings.harness.precision_bits}")
    print(f"Improved constants: {settings.harness.improved_constants} (c = {settings.harness.conjecture_constant})")
    print(f"Render scale: {settings.render.scale}, forces: {settings.render.show_forces}")

    print(f"Env OVERHANG_PRECISION_BITS: {os.getenv('OVERHANG_PRECISION_BITS') or '-'}")
except Exception as e:
    print(f"Error loading config: {e}")
