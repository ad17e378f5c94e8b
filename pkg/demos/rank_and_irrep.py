"""Rank over the center, coset witnesses and an explicit irreducible representation."""
from skeintorus.centerkit import rank_audit
from skeintorus.qtorus import build_irrep, torus_rank
from skeintorus.surface import FIXTURES, fixture


def main():
    for name in FIXTURES:
        t = fixture(name)
        print(f"{name:15s} R(N=3) = {torus_rank(t, 3)}  R(N=5) = {torus_rank(t, 5)}")
    audit = rank_audit(fixture("annulus"), 3)
    print(f"annulus rank audit: {len(audit.witnesses)} witnesses, {audit.verdict}")
    rep = build_irrep(fixture("triangle"), 3)
    print(f"triangle irrep: dimension {rep.dimension}, span rank {rep.span_dimension()},"
          f" relation residual {rep.relation_residual():.1e}")


if __name__ == "__main__":
    main()
