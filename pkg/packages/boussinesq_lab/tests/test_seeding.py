import numpy as np
import pytest

from boussinesq_lab.errors import InvalidInputError
from boussinesq_lab.experiments import seed_sequence, stream, stream_key


def test_named_streams_are_reproducible():
    a = stream(42, "stability-sweep/0.001/0").standard_normal(5)
    b = stream(42, "stability-sweep/0.001/0").standard_normal(5)
    assert np.array_equal(a, b)


def test_streams_do_not_depend_on_siblings():
    alone = stream(7, "energy-balance/triple").standard_normal(3)
    stream(7, "energy-balance/init").standard_normal(1000)
    assert np.array_equal(stream(7, "energy-balance/triple").standard_normal(3), alone)


def test_names_and_seeds_separate_streams():
    base = stream(1, "a").standard_normal(4)
    assert not np.array_equal(base, stream(1, "b").standard_normal(4))
    assert not np.array_equal(base, stream(2, "a").standard_normal(4))


def test_full_u64_seed_range():
    seq = seed_sequence(2**64 - 1, "x")
    assert seq.entropy == 2**64 - 1
    assert seq.spawn_key == (stream_key("x"),)


def test_negative_seed():
    with pytest.raises(InvalidInputError):
        seed_sequence(-1, "x")
