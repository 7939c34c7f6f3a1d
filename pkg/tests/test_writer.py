import io
import json
from fractions import Fraction

import pandas as pd

from twistlab.writer import dumps, json_safe, write_jsonl, write_table


def test_json_safe_large_integers():
    assert json_safe(2**60) == str(2**60)
    assert json_safe(-(2**53)) == str(-(2**53))
    assert json_safe(2**53 - 1) == 2**53 - 1
    assert json_safe({"x": [1, 2**70, Fraction(2, 3)], "ok": True}) == {"x": [1, str(2**70), "2/3"], "ok": True}


def test_write_jsonl():
    stream = io.StringIO()
    assert write_jsonl([{"a": 1}, {"b": [2**64]}], stream) == 2
    lines = stream.getvalue().splitlines()
    assert json.loads(lines[1]) == {"b": [str(2**64)]}
    assert dumps({"a": 1}) == '{"a":1}'


def test_write_table(tmp_path):
    df = pd.DataFrame([{"order": 1, "count": 3}, {"order": 3, "count": 5}])
    csv_path = write_table(df, "density", fmt="csv", base_path=str(tmp_path))
    assert pd.read_csv(csv_path)["count"].tolist() == [3, 5]
    parquet_path = write_table(df, "density", fmt="parquet", base_path=str(tmp_path))
    assert pd.read_parquet(parquet_path).equals(df)
