from fractions import Fraction

import pytest

from app.errors import DomainError, IrrationalWeightError, SizeLimitError
from app.models.configuration import SixVertexConfig
from app.models.weights import VertexWeights
from app.schemas import EmptinessSpec, PentagonSpec
from app.services import gefp
from app.services.six_vertex import (
    asm_count,
    aztec_tiling_weights,
    count_dwbc,
    emptiness_specs,
    enumerate_dwbc,
    gefp_bruteforce,
    vertex_type_census,
    z_bruteforce,
    z_pentagon_bruteforce,
)

ASM_NUMBERS = [1, 2, 7, 42, 429, 7436, 218348]


class TestVertexWeights:
    """Boltzmann weights stored through their squares."""

    def test_free_fermion_condition(self):
        for rho, alpha in ((2, Fraction(1, 2)), (Fraction(3, 2), Fraction(1, 3)), (1, Fraction(1, 7))):
            assert VertexWeights.free_fermion(rho, alpha).is_free_fermion()

    def test_generic_weights_not_free_fermion(self):
        assert not VertexWeights.from_values([1, 1, 1, 1, 1, 1]).is_free_fermion()

    def test_rational_values(self):
        w = VertexWeights.free_fermion(2, Fraction(1, 2))
        assert [w.value(t) for t in range(1, 7)] == [1, 1, 1, 1, 1, 2]
        assert VertexWeights.free_fermion(1, Fraction(1, 2)).value(1) is None

    def test_monomial_pairs_square_roots(self):
        w = VertexWeights.free_fermion(1, Fraction(1, 2))
        assert w.monomial((1, 1, 0, 0, 0, 2)) == Fraction(1, 2)
        with pytest.raises(IrrationalWeightError):
            w.monomial((1, 0, 0, 0, 0, 0))

    def test_negative_weights_rejected(self):
        with pytest.raises(DomainError):
            VertexWeights.from_values([1, 1, 1, 1, -1, 1])

    def test_aztec_weights(self):
        w = aztec_tiling_weights()
        assert [w.value(t) for t in range(1, 7)] == [1, 1, 1, 1, 1, 2]


class TestEnumeration:
    """DWBC configurations on the N x N lattice."""

    def test_single_vertex(self):
        configs = list(enumerate_dwbc(1))
        assert configs == [SixVertexConfig(N=1, vertex_type=((6,),))]

    @pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
    def test_count_matches_asm_numbers(self, N):
        configs = list(enumerate_dwbc(N))
        assert len(configs) == ASM_NUMBERS[N - 1]
        assert len(set(configs)) == len(configs)

    @pytest.mark.slow
    def test_count_n6(self):
        assert sum(1 for _ in enumerate_dwbc(6)) == asm_count(6) == 7436

    def test_every_configuration_obeys_ice_rule(self):
        for config in enumerate_dwbc(4):
            assert config.satisfies_ice_rule()
            counts = config.counts()
            assert counts[5] - counts[4] == 4

    def test_transfer_count_and_product_formula(self):
        for N, expected in enumerate(ASM_NUMBERS, start=1):
            assert count_dwbc(N) == expected
            assert asm_count(N) == expected

    def test_size_limit(self, monkeypatch):
        monkeypatch.setenv("PENTATILE_NMAX", "3")
        with pytest.raises(SizeLimitError):
            next(enumerate_dwbc(4))

    def test_pairing_constant(self):
        for N in range(1, 6):
            assert vertex_type_census(N) == {(0, 0)}


class TestPartitionFunction:
    """Brute-force partition function."""

    def test_single_vertex(self):
        assert z_bruteforce(1, VertexWeights.free_fermion(2, Fraction(1, 2))) == 2

    @pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6])
    def test_aztec_diamond_tilings(self, N):
        assert z_bruteforce(N, aztec_tiling_weights()) == 2 ** (N * (N + 1) // 2)

    def test_alpha_cancels(self):
        for N in range(1, 6):
            for rho, alpha in ((1, Fraction(1, 3)), (Fraction(3, 2), Fraction(1, 4)), (Fraction(3, 2), Fraction(1, 2))):
                w = VertexWeights.free_fermion(rho, alpha)
                assert z_bruteforce(N, w) == gefp.z_ff(N, rho, alpha) == Fraction(rho) ** (N * (N + 1) // 2)


class TestGefpBruteforce:
    """Emptiness probabilities by enumeration."""

    def test_empty_spec(self, weights):
        assert gefp_bruteforce(EmptinessSpec(N=3), weights) == 1

    def test_empty_spec_respects_size_limit(self, monkeypatch):
        monkeypatch.setenv("PENTATILE_NMAX", "3")
        w = VertexWeights.free_fermion(1, Fraction(1, 2))
        assert gefp_bruteforce(EmptinessSpec(N=3), w) == 1
        with pytest.raises(SizeLimitError):
            gefp_bruteforce(EmptinessSpec(N=4), w)

    def test_two_by_two(self, alpha, weights):
        assert gefp_bruteforce(EmptinessSpec(N=2, r=(1,)), weights) == 1 - alpha
        assert gefp_bruteforce(EmptinessSpec(N=2, r=(2,)), weights) == 1

    def test_spec_count(self):
        assert sum(1 for _ in emptiness_specs(5)) == 252

    def test_small_alpha_limit(self):
        # The corner is certainly frozen at alpha = 0
        for r, s in ((2, 1), (1, 2), (2, 2)):
            spec = PentagonSpec(r=r, s=s).emptiness_spec()
            value = gefp_bruteforce(spec, VertexWeights.free_fermion(1, Fraction(1, 10**6)))
            assert 1 - value < Fraction(1, 10**4)

    def test_probability_range(self, weights):
        for spec in emptiness_specs(4):
            assert 0 <= gefp_bruteforce(spec, weights) <= 1

    def test_generic_weights(self):
        w = VertexWeights.from_values([1, 2, 3, 1, 2, 3])
        assert 0 <= gefp_bruteforce(EmptinessSpec(N=3, r=(2, 3)), w) <= 1


class TestPentagonBruteforce:
    """Partition function of the cut domain by enumeration."""

    def test_uncut_domain(self):
        w = aztec_tiling_weights()
        assert z_pentagon_bruteforce(PentagonSpec(r=4, s=0), w) == z_bruteforce(4, w)

    def test_matches_formula(self):
        for r, s in ((1, 1), (2, 1), (2, 2), (1, 3)):
            spec = PentagonSpec(r=r, s=s)
            w = VertexWeights.free_fermion(4, Fraction(3, 4))
            assert z_pentagon_bruteforce(spec, w) == gefp.z_pentagon(spec, 4, Fraction(3, 4))

    def test_generic_weights_relation(self):
        w = VertexWeights.from_values([2, 3, 1, 1, 2, 5])
        spec = PentagonSpec(r=2, s=2)
        z = z_bruteforce(4, w)
        t = gefp_bruteforce(spec.emptiness_spec(), w)
        assert z_pentagon_bruteforce(spec, w) == z * t / Fraction(3) ** 3
