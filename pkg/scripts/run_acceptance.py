"""Run the criterion suite at full or scaled size and save the report.

    python scripts/run_acceptance.py                 # full scale, ~2 min
    python scripts/run_acceptance.py --scale 0.05    # quick look
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tfnp_lab.suite import SuiteConfig, run_suite, suite_report_to_json


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", type=float, default=1.0)
    parser.add_argument("--criterion", action="append", default=None,
                        help="repeatable; default all")
    parser.add_argument("-o", "--output", default=None,
                        help="JSON report path")
    args = parser.parse_args()

    config = SuiteConfig(
        criteria=tuple(args.criterion) if args.criterion else None,
        scale=args.scale,
    )
    report = run_suite(config)
    for result in report.results:
        mark = "PASS" if result.passed else "FAIL"
        print(f"{mark} {result.criterion_id:<28} {result.detail} "
              f"[{result.elapsed_s:.1f}s]")
    print(f"{'PASS' if report.passed else 'FAIL'} suite "
          f"({len(report.results)} criteria, {report.elapsed_s:.1f}s)")
    if args.output:
        Path(args.output).write_text(
            json.dumps(suite_report_to_json(report), indent=2) + "\n"
        )
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
