"""Exact witnesses for the height lemmas, shared by the unit and acceptance tests."""

from flint import acb, acb_poly, fmpz_mpoly_ctx, fmpz_poly

from transcert.heights import AlgebraicNumber, IntPolynomial, random_algebraic, select_root, value_of


def small_algebraic(rng, max_degree=3):
    return random_algebraic(rng, max_degree=max_degree, max_coeff=5)


def evaluation_witness(rng):
    """``(P, args, value)`` with ``value = P(args)`` known exactly."""
    terms = {}
    for _ in range(int(rng.integers(1, 4))):
        key = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        terms[key] = int(rng.integers(-4, 5)) or 1
    p = IntPolynomial.from_dict(terms)
    args = [small_algebraic(rng, 2), small_algebraic(rng, 2)]
    return p, args, value_of(p, args)


def root_witness(rng):
    """``(P, a, b)`` with ``P(a, b) = 0`` for ``P = c2 Y^2 + c1 Y + c0 - e X``."""
    a = small_algebraic(rng, 3)
    c2 = int(rng.integers(0, 3))
    c1 = int(rng.integers(-3, 4))
    if c2 == 0 and c1 == 0:
        c1 = 1
    c0 = int(rng.integers(-3, 4))
    e = int(rng.integers(1, 4))
    p = IntPolynomial.from_dict({(0, 2): c2, (0, 1): c1, (0, 0): c0, (1, 0): -e})
    ctx = fmpz_mpoly_ctx.get(("x", "y"), "lex")
    P = ctx.from_dict({k: c for k, c in p.terms})
    mp = ctx.from_dict({(k, 0): c for k, c in enumerate(a.minpoly) if c})
    res = P.resultant(mp, "x")
    coeffs = [0] * (max(k[1] for k in res.to_dict()) + 1)
    for k, c in res.to_dict().items():
        coeffs[k[1]] = int(c)

    double = a.is_rational and c2 and c1 * c1 == 4 * c2 * (c0 - e * a.as_fraction())

    def target(bits):
        if double:  # P(a, Y) is a square; its root is exact
            return acb(c1) / (-2 * c2)
        av = a.value(bits)
        roots = acb_poly([acb(c0) - e * av, acb(c1), acb(c2)] if c2 else [acb(c0) - e * av, acb(c1)]).roots()
        return min(roots, key=lambda r: (float(r.real.mid()), float(r.imag.mid())))

    b = select_root(fmpz_poly(coeffs), target)
    return p, a, b


__all__ = ["AlgebraicNumber", "evaluation_witness", "root_witness", "small_algebraic"]
