import pytest

from cubicsieve.hnf import count_stable_sublattices, in_lattice, is_stable, stable_hnfs, stable_hnfs_bruteforce, theta


def test_theta_is_multiplication_by_cbrt2():
    # (c, b, a) for a + b t + c t^2; t * (a + b t + c t^2) = 2c + a t + b t^2
    assert theta((3, 2, 1)) == (2, 1, 6)


@pytest.mark.parametrize("n", list(range(1, 41)))
def test_pruned_matches_bruteforce(n):
    assert sorted(stable_hnfs(n)) == sorted(stable_hnfs_bruteforce(n))


@pytest.mark.parametrize("n, count", [(1, 1), (25, 2), (31, 3), (7, 0)])
def test_counts(n, count):
    assert count_stable_sublattices(n) == count


def test_forms_are_stable_and_closed():
    for n in (12, 50, 62):
        for h in stable_hnfs(n):
            assert is_stable(h)
            for row in h:
                assert in_lattice(theta(row), h)
