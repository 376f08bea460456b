"""Self-checks for the test-suite oracles."""

import pytest

import oracle


class TestBruteDisplacement:
    def test_identity(self):
        assert oracle.brute_displacement(list(range(8))) == (0, 0.0, 0)

    def test_full_reversal(self):
        count, mean, worst = oracle.brute_displacement([4, 3, 2, 1, 0])
        assert worst == 4
        assert count == 4  # the middle element stays put

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            oracle.brute_displacement([0, 0, 2])

    def test_empty(self):
        assert oracle.brute_displacement([]) == (0, 0.0, 0)
