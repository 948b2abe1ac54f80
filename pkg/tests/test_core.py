import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockage_kit.core import (
    BlockageSample,
    Dataset,
    NegativeDistance,
    NonFiniteGain,
    NonPositiveFrequency,
    Orientation,
    UnknownOrientation,
    ValidationError,
    dataset_from_csv,
    dataset_to_csv,
    read_dataset,
    validate_sample,
    write_dataset,
)


def test_valid_sample_from_trace_example():
    s = validate_sample(75, 1, "HeadOn", -45.5)
    assert s.orientation is Orientation.HEAD_ON
    assert s.bg_db == -45.5


@pytest.mark.parametrize(
    "fields, exc",
    [
        ((0, 1, "headon", -40), NonPositiveFrequency),
        ((-3, 1, "headon", -40), NonPositiveFrequency),
        ((145, 1.75, "sideways", float("nan")), NonFiniteGain),
        ((145, 1.75, "sideways", float("-inf")), NonFiniteGain),
        ((145, -0.1, "sideways", -40), NegativeDistance),
        ((145, 1.0, "diagonal", -40), UnknownOrientation),
    ],
)
def test_field_errors_are_distinct(fields, exc):
    with pytest.raises(exc):
        validate_sample(*fields)


def test_errors_share_a_base():
    for exc in (NonPositiveFrequency, NegativeDistance, NonFiniteGain, UnknownOrientation):
        assert issubclass(exc, ValidationError)


def test_samples_are_immutable():
    s = validate_sample(75, 1, "sideways", -30)
    with pytest.raises(AttributeError):
        s.bg_db = 0.0


samples = st.builds(
    BlockageSample,
    f_ghz=st.floats(min_value=1e-3, max_value=1e4, allow_nan=False),
    d_m=st.floats(min_value=0, max_value=100, allow_nan=False),
    subject=st.sampled_from(["s1", "s2", "blind"]),
    orientation=st.sampled_from(list(Orientation)),
    bg_db=st.floats(min_value=-300, max_value=50, allow_nan=False),
)


@given(st.lists(samples, max_size=30))
def test_csv_round_trip(items):
    data = Dataset(items, "prop")
    back = dataset_from_csv(dataset_to_csv(data), "prop")
    assert back == data


def test_file_round_trip(tmp_path):
    data = Dataset([validate_sample(75, 1, "headon", -45.5, "s1"), validate_sample(215, 2.5, "sideways", -41.0, "s2")])
    path = tmp_path / "samples.csv"
    write_dataset(data, path)
    assert path.read_text().splitlines()[0] == "f_ghz,d_m,subject,orientation,bg_db"
    assert read_dataset(path).samples == data.samples


def test_csv_rejects_bad_rows():
    bad = "f_ghz,d_m,subject,orientation,bg_db\n75,1,s1,headon,-40\n0,1,s1,headon,-40\n"
    with pytest.raises(NonPositiveFrequency, match="line 3"):
        dataset_from_csv(bad)
    with pytest.raises(ValidationError):
        dataset_from_csv("f,d\n1,2\n")
