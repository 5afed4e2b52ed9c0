#!/usr/bin/env python3
"""
Demo script walking through the main computations of the toolkit
"""

import sys
from pathlib import Path

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from algebra.laurent_poly import DG_WEIGHTS, linear_substitute, weighted_components
from algebra.poly_parser import parse_poly
from analysis.etale_search import EtaleSearch, SearchSpace
from analysis.grading import negative_degree_factor, regularizing_transform, verify_no_regular_elements
from analysis.integrality import integrality_certificate
from models.hirzebruch import SectionData, canonical_class, generator_condition_report, wright_generator_count
from models.wright_algebra import CanonicalIndex3Algebra, express_in_generators, is_member, weighted_degree_table


def run_demo():
    """Run every computation at small, fast bounds"""

    print("🚀 Wright Toolkit - Demo")
    print("=" * 50)

    algebra = CanonicalIndex3Algebra(1)
    print(f"\n📐 Algebra: {algebra.describe()}")
    for symbol, generator, degree in zip(algebra.wright.symbols, algebra.generators, weighted_degree_table(algebra)):
        print(f"   {symbol} = {generator}  (weighted degree {degree})")

    print("\n🔍 Membership and generator expressions")
    for text in ("x^3*y + x", "x^4*y^2 + x^2*y", "x"):
        p = parse_poly(text)
        expression = express_in_generators(algebra, p, 2) if is_member(algebra, p) else None
        print(f"   {text}: member={is_member(algebra, p)} expression={expression or '-'}")

    print("\n📊 Weighted grading")
    f = parse_poly("x^5*y^2 + 3*x^3*y + 2*x")
    for degree, component in weighted_components(f, DG_WEIGHTS).items():
        print(f"   degree {degree}: {component}")
    factor = negative_degree_factor(algebra, f)
    print(f"   factor: m = {factor.m}, g = {factor.g_text()}")

    print("\n🔄 Regularizing substitution")
    p = parse_poly("x*y")
    linear_map = regularizing_transform(p)
    print(f"   map {linear_map.entries_text()} sends {p} to {linear_substitute(p, linear_map).to_text(('v', 'w'))}")

    print("\n✅ Non-regularity check")
    report = verify_no_regular_elements(algebra, 4)
    print(report.to_frame().to_string(index=False))
    print(f"   verdict: {report.verdict}")

    print("\n🗺️ Surface side")
    condition = generator_condition_report()
    sd = SectionData(1, condition.index)
    print(f"   generator condition forces S^2 = {condition.index}")
    print(f"   K on F_1 = {canonical_class(1)}; generators = {wright_generator_count(sd)}")

    print("\n🧮 Integrality certificate")
    certificate = integrality_certificate(parse_poly("x"), parse_poly("x^2"), parse_poly("x^3"), 3, 2)
    print(f"   {certificate.relation_text() if certificate else 'NoneFound'}")

    print("\n🔎 Bounded constant-Jacobian search (coefficients 0,1; T-degree 1)")
    space = SearchSpace(algebra.wright, 1, (0, 1))
    search_report = EtaleSearch(space).run()
    print(f"   expressions: {space.size}, candidates: {len(search_report.candidates)}")

    print(f"\n✅ Demo complete!")


if __name__ == "__main__":
    run_demo()
