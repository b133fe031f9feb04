import pytest

from locfree.latorder import class_set, maximal_order
from locfree.numtheory import primes_below
from locfree.quatalg import b_p_infinity


@pytest.fixture(scope="session")
def class_sets_under_100():
    """Ideal class representatives of a maximal order in B(p,inf) for p < 100.

    Shared between the formula-vs-enumeration and stable-isomorphism tests;
    computing them once keeps the whole suite inside its time budget.
    """
    return {p: class_set(maximal_order(b_p_infinity(p))) for p in primes_below(100)}
