import random
from fractions import Fraction

import pytest

from oracles import evaluate, random_coeff, random_poly
from trideriv.grading import compute_grading
from trideriv.poly import (
    I,
    GaussianRational,
    Poly,
    PolySyntaxError,
    VariableSetError,
    ZeroPolynomialError,
    divides,
    divmod_poly,
    homogeneous_components,
    k_degree_of,
    normal_form,
    parse_poly,
    render_poly,
    trinomial_poly,
)
from conftest import BASIS_A

NAMES = ("T01", "T02", "T11", "T21")


class TestGaussianRational:
    def test_arithmetic(self):
        a = GaussianRational(1, 2)
        assert a * a.conjugate() == 5
        assert I * I == -1
        assert (a / a) == 1
        assert a - 1 == 2 * I
        assert str(GaussianRational(Fraction(-1, 2), 3)) == "-1/2+3i"
        assert str(-I) == "-i"

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / 0

    def test_field_axioms_random(self):
        rng = random.Random(1)
        for _ in range(200):
            a, b, c = (random_coeff(rng, True) for _ in range(3))
            assert a * (b + c) == a * b + a * c
            if b:
                assert (a / b) * b == a


class TestPoly:
    def test_parse_and_render(self, spec_a):
        p = parse_poly("2*T21 - T02^3", spec_a)
        assert render_poly(p) == "-T02^3 + 2*T21"
        q = parse_poly("(1/2 + i)*T01*T11 - 3", spec_a)
        assert parse_poly(str(q), spec_a) == q
        assert parse_poly("i*T21", spec_a) == Poly.var(spec_a.names, "T21") * I
        assert parse_poly("(T01 + T11)^2", spec_a) == parse_poly("T01^2 + 2*T01*T11 + T11^2", spec_a)

    def test_round_trip_random(self):
        rng = random.Random(2)
        for _ in range(100):
            p = random_poly(rng, NAMES, gaussian=True)
            assert parse_poly(str(p), NAMES) == p

    @pytest.mark.parametrize("text", ["T01 +", "T99", "T01^-1", "(T01", "T01 / T02", "x"])
    def test_parse_errors(self, text, spec_a):
        with pytest.raises((PolySyntaxError, VariableSetError)):
            parse_poly(text, spec_a)

    def test_variable_mismatch(self):
        with pytest.raises(VariableSetError):
            Poly.var(NAMES, 0) + Poly.var(("T01", "T11", "T21"), 0)

    def test_partial(self, spec_a):
        p = parse_poly("T01*T02^3 + 5*T02", spec_a)
        assert p.partial("T02") == parse_poly("3*T01*T02^2 + 5", spec_a)
        assert p.partial(2).is_zero

    def test_leading_term_order(self, spec_a):
        # equal total degree: the later variable wins
        p = parse_poly("T01^2 + T21^2 + T11*T02", spec_a)
        assert p.leading_term()[0] == (0, 0, 0, 2)
        with pytest.raises(ZeroPolynomialError):
            Poly.zero(NAMES).leading_term()

    def test_ring_homomorphism_by_evaluation(self):
        rng = random.Random(3)
        for _ in range(100):
            p, q = random_poly(rng, NAMES, gaussian=True), random_poly(rng, NAMES, gaussian=True)
            pt = [random_coeff(rng, True) for _ in NAMES]
            assert evaluate(p + q, pt) == evaluate(p, pt) + evaluate(q, pt)
            assert evaluate(p * q, pt) == evaluate(p, pt) * evaluate(q, pt)
            assert evaluate(p ** 2, pt) == evaluate(p, pt) * evaluate(p, pt)


class TestDivision:
    def test_division_identity_random(self, spec_a):
        g = trinomial_poly(spec_a)
        rng = random.Random(4)
        lm = g.leading_term()[0]
        for _ in range(200):
            p = random_poly(rng, NAMES, terms=6, max_deg=8)
            q, r = divmod_poly(p, g)
            assert q * g + r == p
            assert not any(all(a >= b for a, b in zip(e, lm)) for e, _ in r.items())

    def test_normal_form_examples(self, spec_a):
        g = trinomial_poly(spec_a)
        assert normal_form(g, spec_a).is_zero
        # T01*T02^3 is the leading monomial, so it is rewritten
        assert normal_form(parse_poly("T01*T02^3", spec_a), spec_a) == parse_poly("-T11^3 - T21^2", spec_a)
        assert normal_form(parse_poly("T21^2", spec_a), spec_a) == parse_poly("T21^2", spec_a)

    def test_normal_form_well_defined(self, spec_a):
        g = trinomial_poly(spec_a)
        rng = random.Random(5)
        for _ in range(50):
            p, h = random_poly(rng, NAMES), random_poly(rng, NAMES)
            nf = normal_form(p, spec_a)
            assert normal_form(p + h * g, spec_a) == nf
            assert normal_form(nf, spec_a) == nf

    def test_divides(self, spec_a):
        g = trinomial_poly(spec_a)
        t = Poly.var(NAMES, 0)
        assert divides(t, t * g)
        assert not divides(g, t)


class TestGradingCompatibility:
    def test_components(self, spec_a):
        gr = compute_grading(spec_a).in_basis(BASIS_A)
        p = parse_poly("T01*T02 + T11^2", spec_a)
        comps = homogeneous_components(p, gr)
        assert sorted(w.coords for w in comps) == [(-2, 4), (0, 4)]
        assert sum(comps.values(), Poly.zero(NAMES)) == p
        assert k_degree_of(p, gr) is None
        assert k_degree_of(parse_poly("T11^2", spec_a), gr).coords == (0, 4)
        assert k_degree_of(parse_poly("T02^3", spec_a), gr).coords == (3, 3)
        with pytest.raises(ZeroPolynomialError):
            k_degree_of(Poly.zero(NAMES), gr)

    def test_trinomial_is_homogeneous(self, spec_a, spec_b, spec_c):
        for s in (spec_a, spec_b, spec_c):
            gr = compute_grading(s)
            assert k_degree_of(trinomial_poly(s), gr, reduce=False) == gr.mu

    def test_product_degree_additive(self, spec_b):
        gr = compute_grading(spec_b)
        rng = random.Random(6)
        names = spec_b.names
        for _ in range(50):
            a = Poly.monomial(names, [rng.randint(0, 3) for _ in names], 2)
            b = Poly.monomial(names, [rng.randint(0, 3) for _ in names], -1)
            da = k_degree_of(a, gr, reduce=False)
            db = k_degree_of(b, gr, reduce=False)
            assert k_degree_of(a * b, gr, reduce=False) == da + db
