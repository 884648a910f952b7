"""Walk one instance through the whole shop, narrating each stage.

Generates a local-optimization instance, normalizes it, reduces it to a
quotient-pigeon instance, solves that by the image walk, pulls the
certificate back, and verifies it against the original.  Then tries the
long-choice reduction on the core (the hole orbit usually folds first,
which is itself a certificate), and finally plays the stone-picking game
against a seeded long-choice instance.

    python scripts/demo_pipeline.py --n 3 --seed 21
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from tfnp_lab.game import playout
from tfnp_lab.generators import localopt_instance, long_choice_instance
from tfnp_lab.lc_reduction import FeasibleSearch, PrefixCollisionError
from tfnp_lab.oracles import solve_qp_walk
from tfnp_lab.problems import Certificate, verify_solution
from tfnp_lab.reductions import localopt_pipeline, recover_from_prefix_collision
from tfnp_lab.roundtrip import build_reduction


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--seed", type=int, default=21)
    args = parser.parse_args()

    inst = localopt_instance(args.n, args.n, args.seed)
    print(f"local-opt instance: n={inst.n}, m={inst.m}, seed={args.seed}")

    artifact = localopt_pipeline(inst)
    qp = artifact.reduced
    print(f"reduced to quotient pigeon: n={qp.n}, hole={qp.v_star}")

    cert, trace = solve_qp_walk(qp)
    print(f"walk from the hole folded after {len(trace.elements) - 1} steps "
          f"({trace.reason}): {cert.kind}{cert.witnesses}")

    back = artifact.pullback(cert)
    verdict = verify_solution(inst, back)
    print(f"pulled back to {back.kind}{back.witnesses}: "
          f"{'accepted' if verdict else f'REJECTED ({verdict.code})'}")
    if not verdict:
        return 1

    try:
        clc_artifact = build_reduction("qp_to_clc", qp)
    except PrefixCollisionError as err:
        cert = err.certificate or recover_from_prefix_collision(qp, err.trace)
        print(f"long-choice reduction short-circuited: the hole orbit folds, "
              f"certificate {cert.kind}{cert.witnesses}")
    else:
        seqs = list(FeasibleSearch(qp).enumerate(limit=3))
        print(f"long-choice reduction built: a0={clc_artifact.reduced.a0}, "
              f"first feasible sequences {seqs}")

    game_inst = long_choice_instance(args.n, args.seed)
    final = playout(game_inst)
    ok = verify_solution(game_inst, Certificate.long_choice(final.picks))
    print(f"stone game against seeded stage predicates: {final.winner} wins "
          f"with picks {final.picks} "
          f"({'verified' if ok else 'rejected'})")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
