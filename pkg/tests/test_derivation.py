import random
from fractions import Fraction

import pytest

from conftest import BASIS_A
from oracles import random_poly
from trideriv.derivation import (
    BetaPatternError,
    Derivation,
    ElementaryFamily,
    FamilyConditionError,
    IllDefinedDerivationError,
    NotHomogeneousScalarError,
    NotInKernelError,
    PreconditionNotVerifiedError,
    ZeroDerivationError,
    apply_derivation,
    apply_raw,
    bounded_nilpotency,
    enumerate_elementary_families,
    homogeneity_degree,
    is_well_defined,
    kernel_membership,
    make_elementary,
    moving_variables,
    scale_by_kernel,
    structural_check,
    verify_family,
)
from trideriv.grading import compute_grading, is_primitive_degree
from trideriv.poly import I, Poly, normal_form, parse_poly
from trideriv.trinomial import TrinomialSpec


def images(d):
    return {name: str(p) for name, p in zip(d.spec.names, d.images) if p}


class TestEnumeration:
    def test_spec_a(self, spec_a):
        fams = enumerate_elementary_families(spec_a)
        assert [f.label() for f in fams] == ["II(C=(1,.,1), i0=1)", "II(C=(1,1,.), i0=2)"]

    def test_spec_a_images(self, spec_a):
        i1 = ElementaryFamily("II", (1, None, 1), 1)
        assert images(make_elementary(spec_a, i1, (1, 0, -1))) == {"T01": "2*T21", "T21": "-T02^3"}
        i2 = ElementaryFamily("II", (1, 1, None), 2)
        assert images(make_elementary(spec_a, i2, (1, -1, 0))) == {"T01": "3*T11^2", "T11": "-T02^3"}

    def test_spec_b(self, spec_b):
        fams = enumerate_elementary_families(spec_b)
        assert sum(f.type == "I" for f in fams) == 4
        assert sum(f.type == "II" for f in fams) == 8
        d = make_elementary(spec_b, ElementaryFamily("I", (2, 2, 1)), (Fraction(1, 2), Fraction(1, 2), -1))
        assert images(d) == {"T02": "T11*T21", "T12": "T01*T21", "T21": "-T01*T11"}

    def test_spec_c(self, spec_c):
        assert enumerate_elementary_families(spec_c) == []

    def test_admissibility(self, spec_a):
        with pytest.raises(FamilyConditionError):
            make_elementary(spec_a, ElementaryFamily("I", (1, 1, 1)))
        with pytest.raises(FamilyConditionError):
            make_elementary(spec_a, ElementaryFamily("II", (2, None, 1), 1))

    def test_family_validation(self):
        with pytest.raises(ValueError):
            ElementaryFamily("I", (1, None, 1))
        with pytest.raises(ValueError):
            ElementaryFamily("II", (1, None, None), 1)
        with pytest.raises(ValueError):
            ElementaryFamily("III", (1, 1, 1))
        fam = ElementaryFamily("II", (1, None, 1), 1)
        assert ElementaryFamily.from_json(fam.to_json()) == fam

    @pytest.mark.parametrize("beta", [(1, 1, 1), (1, 0, -1), (0, 0, 0)])
    def test_beta_type_i(self, spec_b, beta):
        with pytest.raises(BetaPatternError):
            make_elementary(spec_b, ElementaryFamily("I", (1, 1, 1)), beta)

    def test_beta_type_ii(self, spec_a):
        fam = ElementaryFamily("II", (1, None, 1), 1)
        with pytest.raises(BetaPatternError):
            make_elementary(spec_a, fam, (1, -1, 0))
        make_elementary(spec_a, fam, (I, 0, -I))


class TestVerdicts:
    def test_elementary_a(self, spec_a):
        g = compute_grading(spec_a).in_basis(BASIS_A)
        d = make_elementary(spec_a, ElementaryFamily("II", (1, None, 1), 1))
        assert is_well_defined(d)
        assert homogeneity_degree(d, g).coords == (3, 0)
        verdict = bounded_nilpotency(d)
        assert verdict.is_nilpotent
        assert verdict.indices == {"T01": 3, "T02": 1, "T11": 1, "T21": 2}
        assert is_primitive_degree(g, homogeneity_degree(d, g))
        assert structural_check(d)

    def test_non_homogeneous_lnd(self, spec_c):
        d = Derivation.from_images(spec_c, {"T01": "i*T21", "T11": "-T21", "T21": "-i*T01 + T11"})
        assert apply_raw(d, Poly.var(spec_c.names, 0) ** 2 + Poly.var(spec_c.names, 1) ** 2
                         + Poly.var(spec_c.names, 2) ** 2).is_zero
        verdict = bounded_nilpotency(d)
        assert verdict.status == "nilpotent" and verdict.max_index == 3
        assert homogeneity_degree(d) is None
        with pytest.raises(PreconditionNotVerifiedError):
            structural_check(d)

    def test_non_nilpotent_witness(self, spec_b):
        d = Derivation.from_images(spec_b, {"T01": "T01", "T02": "-T02"})
        assert is_well_defined(d)
        assert homogeneity_degree(d).is_identity
        verdict = bounded_nilpotency(d)
        assert verdict.status == "non_nilpotent" and verdict.witness == "T01"

    def test_not_within_bound(self, spec_a):
        d = make_elementary(spec_a, ElementaryFamily("II", (1, None, 1), 1))
        assert bounded_nilpotency(d, bound=2).status == "not_within_bound"

    def test_ill_defined(self, spec_a):
        d = Derivation.from_images(spec_a, {"T01": "1"})
        assert not is_well_defined(d)
        with pytest.raises(IllDefinedDerivationError):
            bounded_nilpotency(d)

    def test_zero_derivation(self, spec_a):
        with pytest.raises(ZeroDerivationError):
            homogeneity_degree(Derivation.from_images(spec_a, {}))

    def test_structural_check_artificial(self, spec_b):
        # moves both variables of monomial 0; well defined but not an LND
        d = Derivation.from_images(spec_b, {"T01": "T01", "T02": "-T02"})
        assert moving_variables(d)[0] == [1, 2]
        assert structural_check(d, verify=False) is False
        with pytest.raises(PreconditionNotVerifiedError):
            structural_check(d)


class TestKernelScaling:
    def test_powers(self, spec_a):
        g = compute_grading(spec_a).in_basis(BASIS_A)
        d = make_elementary(spec_a, ElementaryFamily("II", (1, None, 1), 1))
        t11 = Poly.var(spec_a.names, "T11")
        for k in range(4):
            e = scale_by_kernel(d, t11 ** k, g)
            assert homogeneity_degree(e, g).coords == (3, 2 * k)
            assert bounded_nilpotency(e).is_nilpotent

    def test_errors(self, spec_a):
        d = make_elementary(spec_a, ElementaryFamily("II", (1, None, 1), 1))
        with pytest.raises(NotInKernelError):
            scale_by_kernel(d, Poly.var(spec_a.names, "T01"))
        with pytest.raises(NotHomogeneousScalarError):
            scale_by_kernel(d, parse_poly("T02 + T11", spec_a))
        with pytest.raises(NotHomogeneousScalarError):
            scale_by_kernel(d, Poly.zero(spec_a.names))

    def test_kernel_membership(self, spec_a):
        d = make_elementary(spec_a, ElementaryFamily("II", (1, None, 1), 1))
        assert kernel_membership(d, parse_poly("T02^2*T11 + 5", spec_a))


def test_leibniz_on_classes():
    rng = random.Random(10)
    specs = [TrinomialSpec.of((1, 3), 3, 2), TrinomialSpec.of((1, 1), (1, 1), 2),
             TrinomialSpec.of((1, 2), (2, 1), (3,))]
    for trial in range(60):
        s = specs[trial % len(specs)]
        fams = enumerate_elementary_families(s)
        d = make_elementary(s, fams[rng.randrange(len(fams))])
        p, q = random_poly(rng, s.names, gaussian=True), random_poly(rng, s.names, gaussian=True)
        lhs = apply_derivation(d, p * q)
        rhs = normal_form(apply_derivation(d, p) * q + p * apply_derivation(d, q), s)
        assert lhs == rhs


def test_verify_family_corpus_sample():
    for s in (TrinomialSpec.of((1, 3), 3, 2), TrinomialSpec.of((1, 1), (1, 1), 2),
              TrinomialSpec.of((1, 1), (1, 1), (1, 1))):
        for fam in enumerate_elementary_families(s):
            assert verify_family(s, fam).ok, (s, fam)
