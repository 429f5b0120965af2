import math

import pytest

from qtilt.enums import Region

from qtilt.lattice import (
    Params, Weight, TwistLabel, LatticeError, UNIT_LABEL,
    canonicalize_label, frobenius_scale, is_dominant, is_special, length_label, length_weight,
    recompose, region, region_contains, special_labels, steinberg_factorize
)

from qtilt.charring import twisted_tilting_character


def coprime_grid():
    return [(ell, p) for ell in range(2, 14) for p in (2, 3, 5, 7, 11, 13) if math.gcd(ell, p) == 1]


class TestParams:
    def setup_method(self, method):
        pass

    def teardown_method(self, method):
        pass

    def test_params_should_reject_invalid_pairs(self):
        with pytest.raises(LatticeError):
            Params(1, 3)

        with pytest.raises(LatticeError):
            Params(3, 4)

        with pytest.raises(LatticeError):
            Params(4, 2)

        with pytest.raises(LatticeError):
            Params(6, 3)

    def test_params_should_expose_moduli_and_scales(self):
        params = Params(3, 5)

        assert params.modulus(-1) == 3
        assert params.modulus(0) == 5
        assert params.modulus(4) == 5

        assert params.scale(-1) == 1
        assert params.scale(0) == 3
        assert params.scale(2) == 75

        assert params.to_json() == {"l": 3, "p": 5}


class TestWeights:
    def setup_method(self, method):
        pass

    def teardown_method(self, method):
        pass

    def test_is_dominant(self):
        assert is_dominant(Weight(3, 1))
        assert is_dominant(Weight(2, 2))
        assert not is_dominant(Weight(1, 2))
        assert is_dominant(Weight(-1, -3))

    def test_region_examples(self):
        assert region(Weight(4, 0), 5) == Region.RESTRICTED
        assert region(Weight(8, 0), 5) == Region.BAND
        assert region(Weight(9, 0), 5) == Region.OUTSIDE
        assert region(Weight(7, 3), 3) == Region.BAND

        with pytest.raises(LatticeError):
            region(Weight(0, 1), 5)

    def test_region_should_partition_the_dominant_weights(self):
        for modulus in range(2, 8):
            for diff in range(0, 40):
                w = Weight(diff + 2, 2)

                restricted = region_contains(Region.RESTRICTED, w, modulus)
                pi = region_contains(Region.PI, w, modulus)
                outside = region_contains(Region.OUTSIDE, w, modulus)
                band = region_contains(Region.BAND, w, modulus)

                assert pi != outside
                assert pi == (restricted or band)

                # X₁ and the band meet exactly at the Steinberg weight
                assert (restricted and band) == (diff == modulus - 1)

    def test_frobenius_scale_and_length(self):
        assert frobenius_scale(Weight(2, 1), 3) == Weight(6, 3)
        assert frobenius_scale(Weight(0, -1), 4) == Weight(0, -4)

        assert length_weight(Weight(7, 3)) == 4
        assert length_weight(Weight(5, 5)) == 0


class TestLabels:
    def setup_method(self, method):
        self.params = Params(3, 5)

    def teardown_method(self, method):
        pass

    def test_steinberg_factorize_examples(self):
        assert steinberg_factorize(Weight(37, 0), Params(3, 5)) == TwistLabel.from_weights((1, 0), (2, 0), (2, 0))
        assert steinberg_factorize(Weight(4, 0), Params(5, 3)) == TwistLabel.from_weights((4, 0))
        assert steinberg_factorize(Weight(2, 2), Params(2, 3)) == TwistLabel.from_weights((0, 0), (1, 1))
        assert steinberg_factorize(Weight(0, 0), Params(2, 3)) == UNIT_LABEL

    def test_steinberg_factorize_should_reject_non_dominant_weights(self):
        with pytest.raises(LatticeError):
            steinberg_factorize(Weight(0, 3), self.params)

    def test_steinberg_factorize_should_recompose(self):
        for ell, p in coprime_grid():
            params = Params(ell, p)

            for diff in range(0, 1001, 7):
                for b in (-3, 0, 5):
                    w = Weight(diff + b, b)
                    label = steinberg_factorize(w, params)

                    assert recompose(label, params) == w
                    assert is_special(label, params)
                    assert length_label(label, params) == diff

                    for level, weight in label.entries():
                        assert 0 <= weight.diff <= params.modulus(level) - 1

                    assert canonicalize_label(label, params) == label

    def test_length_label_example(self):
        assert length_label(TwistLabel.from_weights((1, 0), (2, 0), (2, 0)), self.params) == 37

    def test_is_special_examples(self):
        assert is_special(TwistLabel.from_weights((4, 0), (8, 0)), self.params)
        assert not is_special(TwistLabel.from_weights((5, 0)), self.params)
        assert not is_special(TwistLabel.from_weights((0, 0), (9, 0)), self.params)

    def test_canonicalize_label_should_move_determinants_up(self):
        params = Params(2, 3)

        assert canonicalize_label(TwistLabel.from_weights((2, 2)), params) == TwistLabel.from_weights((0, 0), (1, 1))
        assert canonicalize_label(TwistLabel.from_weights((3, 2)), params) == TwistLabel.from_weights((1, 0), (1, 1))
        assert canonicalize_label(TwistLabel.from_weights((1, 0), (3, 3)), params) == \
            TwistLabel.from_weights((1, 0), (0, 0), (1, 1))

    def test_canonicalize_label_should_keep_negative_determinants_on_the_top_level(self):
        params = Params(2, 3)
        label = TwistLabel.from_weights((0, -1))

        canonical = canonicalize_label(label, params)

        assert canonical == TwistLabel.from_weights((2, 1), (-1, -1))
        assert twisted_tilting_character(canonical, params) == twisted_tilting_character(label, params)

    def test_canonicalize_label_should_be_idempotent_and_preserve_characters(self):
        params = Params(3, 2)

        for qlevel in [(4, 0), (5, 3), (2, -2), (1, 1)]:
            for level0 in [(0, 0), (2, 1), (1, -4), (3, 3)]:
                for level1 in [(0, 0), (1, 0), (-2, -2)]:
                    label = TwistLabel.from_weights(qlevel, level0, level1)
                    canonical = canonicalize_label(label, params)

                    assert canonicalize_label(canonical, params) == canonical
                    assert twisted_tilting_character(canonical, params) == twisted_tilting_character(label, params)

                    for level, weight in canonical.entries():
                        if level < canonical.height:
                            assert 0 <= weight.b < params.modulus(level)

    def test_canonicalize_label_should_reject_non_dominant_levels(self):
        with pytest.raises(LatticeError):
            canonicalize_label(TwistLabel.from_weights((0, 1)), self.params)

    def test_special_labels(self):
        params = Params(2, 3)

        assert special_labels(params, 0) == [UNIT_LABEL]
        assert special_labels(params, -1) == []

        labels = special_labels(params, 4)

        assert len(labels) == 7
        assert labels[0] == UNIT_LABEL
        assert TwistLabel.from_weights((2, 0), (1, 0)) in labels
        assert all(is_special(label, params) and length_label(label, params) <= 4 for label in labels)
        assert [length_label(label, params) for label in labels] == sorted(length_label(label, params) for label in labels)

    def test_special_labels_should_honour_max_height(self):
        params = Params(3, 2)

        labels = special_labels(params, 10, max_height=-1)

        assert all(label.height == -1 for label in labels)
        assert len(labels) == 5

    def test_label_string_form(self):
        assert str(TwistLabel.from_weights((1, 0), (2, 0))) == "1,0;2,0"
        assert str(UNIT_LABEL) == "0,0"
