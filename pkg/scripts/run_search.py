#!/usr/bin/env python3
"""
Long-running constant-Jacobian search
Runs a checkpointed search over a Wright algebra and records the result in the database
"""

import sys
import os
import argparse
import logging
import re
from datetime import datetime

# Add the src directory to the path
sys.path.append(os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from algebra.errors import CheckpointError, PreconditionError
from analysis.etale_search import EtaleSearch, SearchSpace
from config.settings import parse_rational_list
from database.db_manager import DatabaseManager
from models.wright_algebra import WrightAlgebra


def main():
    parser = argparse.ArgumentParser(description='Checkpointed constant-Jacobian search over a Wright algebra')
    # let --coeffs -1,0,1 and --alphas -2/3 through as values
    parser._negative_number_matcher = re.compile(r"^-\.?\d")
    parser.add_argument('--m', type=int, default=3,
                       help='Wright algebra parameter m (default: 3)')
    parser.add_argument('--alphas', default='0,1',
                       help='Comma-separated alphas (default: 0,1)')
    parser.add_argument('--bound', type=int, default=2,
                       help='T-degree bound (default: 2)')
    parser.add_argument('--coeffs', default='-1,0,1',
                       help='Coefficient set (default: -1,0,1)')
    parser.add_argument('--workers', type=int, default=os.cpu_count() or 1,
                       help='Number of worker threads (default: CPU count)')
    parser.add_argument('--chunk-size', type=int, default=4096,
                       help='Expressions per work unit (default: 4096)')
    parser.add_argument('--checkpoint', default='data/search_checkpoint.json',
                       help='Checkpoint file, resumed when present')
    parser.add_argument('--stats-only', action='store_true',
                       help='Only show recorded runs')

    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    print("🔎 Wright Algebra Constant-Jacobian Search")
    print("=" * 50)

    db = DatabaseManager()
    print(f"📊 Recorded search runs: {db.get_run_count()}")
    for run in db.get_search_runs(limit=5):
        print(f"   #{run['id']} candidates={run['candidates_found']} completed={bool(run['completed'])}")
    print()

    if args.stats_only:
        return

    try:
        algebra = WrightAlgebra(args.m, parse_rational_list(args.alphas))
        space = SearchSpace(algebra, args.bound, parse_rational_list(args.coeffs))
        search = EtaleSearch(space, workers=args.workers, chunk_size=args.chunk_size)
    except PreconditionError as e:
        print(f"❌ {type(e).__name__}: {e}")
        sys.exit(3)

    print(f"🚀 Starting search...")
    print(f"   Algebra: {algebra.describe()}")
    print(f"   Expressions: {space.size}")
    print(f"   Worker threads: {args.workers}")
    print(f"   Checkpoint: {args.checkpoint}")
    print()

    def announce(candidate):
        data = candidate.to_dict()
        print(f"   ⚠️ p = {data['p']} ; q = {data['q']} ; J = {data['jacobian']}")

    start_time = datetime.now()

    try:
        report = search.run(checkpoint_path=args.checkpoint, resume=True, on_candidate=announce)
        duration = datetime.now() - start_time

        print()
        print("✅ Search completed!")
        print(f"   Candidates: {len(report.candidates)}")
        print(f"   Exact solves: {report.prefilter_survivors}")
        print(f"   Duration: {duration}")
        if report.counterexample:
            print("🚨 COUNTEREXAMPLE CANDIDATE in the canonical index-3 algebra; verify independently")

        run_id = db.save_search_run(report.to_dict(), report.elapsed)
        print(f"💾 Recorded as run #{run_id}")

    except KeyboardInterrupt:
        print("\n⏹️ Search interrupted by user")
        print(f"   Rerun with the same arguments to resume from {args.checkpoint}")

    except CheckpointError as e:
        print(f"\n❌ Checkpoint error: {e}")
        sys.exit(2)


if __name__ == "__main__":
    main()
