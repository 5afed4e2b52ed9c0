#!/usr/bin/env python3
"""
Test script to verify all modules are working correctly
"""

import sys
import os
from pathlib import Path

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))


def test_database(tmp_path):
    """Test database functionality"""
    from database.db_manager import DatabaseManager
    db = DatabaseManager(str(tmp_path / "test.db"))

    assert db.get_run_count() == 0
    assert db.get_certificates() == []
    assert db.get_lemma_reports() == []


def test_algebra():
    """Test polynomial core functionality"""
    from algebra.poly_parser import parse_poly
    from algebra.laurent_poly import jacobian_determinant

    p = parse_poly("x^3*y + x")
    assert str(p) == "x + x^3*y"
    assert jacobian_determinant(parse_poly("x"), parse_poly("y")) == parse_poly("1")


def test_models():
    """Test Wright algebra and surface models"""
    from algebra.poly_parser import parse_poly
    from models.wright_algebra import CanonicalIndex3Algebra, is_member
    from models.hirzebruch import dg_index_from_generator_condition

    algebra = CanonicalIndex3Algebra(1)
    assert is_member(algebra, parse_poly("x^3*y + x"))
    assert dg_index_from_generator_condition() == 3


def test_cli_loads():
    """Test the command-line parser builds"""
    from ui.cli import build_parser
    parser = build_parser()
    args = parser.parse_args(["dg-index"])
    assert args.command == "dg-index"


def main():
    """Run all tests"""
    import tempfile

    print("🧪 Testing Wright Toolkit Modules\n")
    os.makedirs("logs", exist_ok=True)

    tests = [test_algebra, test_models, test_cli_loads]
    results = []
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
            results.append(True)
        except Exception as e:
            print(f"❌ {test.__name__} failed: {e}")
            results.append(False)
    with tempfile.TemporaryDirectory() as directory:
        try:
            test_database(Path(directory))
            print("✅ test_database")
            results.append(True)
        except Exception as e:
            print(f"❌ test_database failed: {e}")
            results.append(False)

    print(f"\n📊 {sum(results)}/{len(results)} checks passed")
    return all(results)


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
