"""Quantum traces, valuations and a central-move certificate on small fixtures."""
import random

from skeintorus.centerkit import base_pool, central_reduce, random_central_element
from skeintorus.diagram import boundary_element, fixture_diagram, peripheral_curve, valuation
from skeintorus.qtrace import leading_term, trace_diagram
from skeintorus.surface import fixture


def main():
    t = fixture("punctured_disc")
    (p,) = t.inner_punctures
    print("Tr(peripheral curve) =", trace_diagram(peripheral_curve(t, p)))
    print("Tr(boundary element) =", trace_diagram(boundary_element(t, 0)))

    d = fixture_diagram("spiral_annulus")
    x = trace_diagram(d)
    print(f"spiral arc: {len(x.terms)} monomials, leading exponent {leading_term(x)[1]},"
          f" valuation {valuation(d)}")

    t = fixture("holed_torus")
    x = random_central_element(t, 3, random.Random(1), base_pool(t, 3))
    cert = central_reduce(x, 3)
    print(f"central element with {len(x.terms)} monomials reduced by central moves ({cert.steps}),"
          f" replay zero: {cert.replay(x).is_zero()}")


if __name__ == "__main__":
    main()
