"""Smoke test for the incalg extension module."""

import incalg

chain = incalg.Poset("elements: 1 2\n1 < 2\n")
assert chain.elements == ["1", "2"]
assert chain.dimension == 3
assert chain.involutions() == [[("1", "2")]]

theta = incalg.InvolutionSpec(chain, "lambda:\n1 <-> 2\n")
assert theta.validate()

f = incalg.Element(chain, "1 1 2\n1 2 3\n2 2 5\n")
g = incalg.Element(chain, "1 2 1\n")
assert theta(theta(f)) == f
assert theta(f * g) == theta(g) * theta(f)
assert f * f.inverse() == incalg.Element.delta(chain)

d = incalg.LinearMap(chain, "e 1 2 -> 1 1 1; 2 2 -1\n")
assert incalg.is_jordan(d, theta)
assert incalg.star_failure(d, theta) == ("e 1 2", "e 2 2")
assert incalg.inner_element(d, theta) is None

basis = incalg.jsd_basis(theta)
assert len(basis) == 3
assert len(incalg.star_basis(theta)) == 1
for b in basis:
    parts = incalg.decompose(b, theta)
    assert parts["residual_zero"]
    assert parts["inner_part"] + parts["transposed_part"] == b

parts = incalg.decompose(d, theta)
assert parts["gamma"] == {"2": "1"}
assert parts["inner_f"].is_zero()

inner = incalg.inner_derivation(f, theta)
assert incalg.is_jordan(inner, theta)

try:
    incalg.Poset("elements: 1 2\n1 < 2\n2 < 1\n")
except ValueError as e:
    assert "CycleDetected" in str(e)
else:
    raise AssertionError("cycle accepted")

print("smoke test passed")
