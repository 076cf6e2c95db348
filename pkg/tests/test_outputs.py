import json
import os
from fractions import Fraction

import numpy as np
import pytest

from metastable_ac.errors import InvariantError
from metastable_ac.outputs import atomic_write, csv_text, load_schema, to_json, validate


def test_json_handles_numpy_and_fractions():
    obj = {"a": Fraction(1, 4), "b": np.arange(3), "c": np.float64(0.5), "d": np.bool_(True)}
    assert json.loads(to_json(obj)) == {"a": 0.25, "b": [0, 1, 2], "c": 0.5, "d": True}
    with pytest.raises(TypeError):
        to_json({"x": object()})


@pytest.mark.parametrize("name", ["point", "landscape", "hierarchy", "rates", "gap", "exit"])
def test_schemas_load(name):
    assert load_schema(name)["type"] == "object"


def test_validation_rejects_bad_output():
    with pytest.raises(InvariantError):
        validate({"slope": "steep"}, "exit")


def test_atomic_write_replaces_file(tmp_path):
    p = tmp_path / "x.txt"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    assert os.listdir(tmp_path) == ["x.txt"]


def test_csv_text():
    assert csv_text(["a", "b"], [[1, "x,y"]]) == 'a,b\n1,"x,y"\n'
