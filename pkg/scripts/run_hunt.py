"""Sweep the counterexample hunter and file a JSONL report.

Every record is independently replayable:

    python scripts/run_hunt.py --family kernel --family random \
        --n 3 --n 4 --seeds 500 -o hunt.jsonl
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tfnp_lab.lc_reduction import HuntConfig, hunt_counterexamples
from tfnp_lab.serialization import hunt_report_lines


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", action="append",
                        choices=("equality", "kernel", "random"),
                        help="repeatable; default kernel + random")
    parser.add_argument("--n", action="append", type=int,
                        help="repeatable; default 3 and 4")
    parser.add_argument("--seeds", type=int, default=200)
    parser.add_argument("--base-seed", type=int, default=0)
    parser.add_argument("--sample-count", type=int, default=100)
    parser.add_argument("--enumerate-width", type=int, default=4)
    parser.add_argument("-o", "--output", default=None,
                        help="JSONL path; stdout when omitted")
    args = parser.parse_args()

    config = HuntConfig(
        families=tuple(args.family or ("kernel", "random")),
        ns=tuple(args.n or (3, 4)),
        seeds=args.seeds,
        base_seed=args.base_seed,
        sample_count=args.sample_count,
        enumerate_width=args.enumerate_width,
    )
    report = hunt_counterexamples(config)
    text = "\n".join(hunt_report_lines(report)) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)

    s = report.summary
    print(
        f"{s['sequences']} sequences: {s['recovered']} recovered, "
        f"{s['failure']} pullback failures, "
        f"{s['probe_violations']} probe violations; "
        f"{s['prefix_collision']} instances folded on the hole orbit, "
        f"{s['no_sequences']} had no feasible sequence",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
