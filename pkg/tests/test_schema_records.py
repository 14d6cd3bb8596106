"""Schema construction rules, record conformance, and canonical identity keys."""
from __future__ import annotations

import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from specguard.errors import FormatError
from specguard.speccore.records import (
    FeatureRecord,
    Prediction,
    canonical_key,
    conformance_errors,
    prediction_errors,
    record_from_json_dict,
    record_to_json_dict,
)
from specguard.speclang.schema import (
    BooleanType,
    CategoryType,
    GridType,
    IntegerType,
    NumberType,
    Schema,
    schema_from_json_dict,
    schema_to_json_dict,
)


def make_schema():
    return Schema(
        {
            "height": NumberType(),
            "count": IntegerType(),
            "flag": BooleanType(),
            "kind": CategoryType(("car", "bike")),
            "img": GridType(2, 2),
        },
        ("yes", "no"),
    )


class TestSchemaValidation:
    def test_empty_labels_rejected(self):
        with pytest.raises(FormatError, match="label alphabet is empty"):
            Schema({"x": NumberType()}, ())

    def test_duplicate_labels_rejected(self):
        with pytest.raises(FormatError, match="duplicates"):
            Schema({}, ("a", "a"))

    def test_zero_sized_grid_rejected(self):
        with pytest.raises(FormatError, match="dimensions < 1"):
            Schema({"g": GridType(0, 3)}, ("a",))

    def test_empty_category_rejected(self):
        with pytest.raises(FormatError, match="has no values"):
            Schema({"k": CategoryType(())}, ("a",))

    def test_duplicate_category_values_rejected(self):
        with pytest.raises(FormatError, match="duplicate values"):
            Schema({"k": CategoryType(("x", "x"))}, ("a",))

    def test_json_round_trip(self):
        schema = make_schema()
        assert schema_from_json_dict(schema_to_json_dict(schema)) == schema

    def test_unknown_field_type_rejected(self):
        with pytest.raises(FormatError, match="unknown type"):
            schema_from_json_dict({"fields": {"x": {"type": "complex"}}, "labels": ["a"]})

    def test_grid_needs_integer_dimensions(self):
        with pytest.raises(FormatError, match="integer 'rows' and 'cols'"):
            schema_from_json_dict(
                {"fields": {"g": {"type": "grid", "rows": "2", "cols": 2}}, "labels": ["a"]}
            )


class TestConformance:
    def test_conforming_record(self):
        fields = {
            "height": 1.5,
            "count": 3,
            "flag": True,
            "kind": "car",
            "img": [[0, 1], [2, 3]],
        }
        assert conformance_errors(fields, make_schema()) == []

    def test_missing_and_unknown_fields(self):
        errors = conformance_errors({"height": 1.0, "extra": 2}, make_schema())
        assert any("missing field 'count'" in e for e in errors)
        assert any("unknown field 'extra'" in e for e in errors)

    @pytest.mark.parametrize(
        "field,value,fragment",
        [
            ("height", "tall", "finite number"),
            ("height", float("nan"), "finite number"),
            ("height", float("inf"), "finite number"),
            ("height", True, "finite number"),  # bools are not numbers
            ("count", 2.5, "must be an integer"),
            ("flag", 1, "must be a boolean"),
            ("kind", "plane", "outside"),
            ("kind", 7, "category string"),
            ("img", [[0, 1]], "2 rows"),
            ("img", [[0], [1]], "2 cells"),
            ("img", [[0, "x"], [1, 2]], "finite number"),
        ],
    )
    def test_bad_field_values(self, field, value, fragment):
        fields = {
            "height": 1.5,
            "count": 3,
            "flag": True,
            "kind": "car",
            "img": [[0, 1], [2, 3]],
        }
        fields[field] = value
        errors = conformance_errors(fields, make_schema())
        assert any(fragment in e for e in errors), errors

    def test_integer_valued_float_conforms_to_integer(self):
        assert conformance_errors(
            {"height": 1, "count": 3.0, "flag": False, "kind": "bike", "img": [[0, 0], [0, 0]]},
            make_schema(),
        ) == []


class TestPredictionErrors:
    def test_good(self):
        assert prediction_errors(Prediction("yes", 0.5), make_schema()) == []
        assert prediction_errors(Prediction("no"), make_schema()) == []

    def test_unknown_label(self):
        errors = prediction_errors(Prediction("maybe", 0.5), make_schema())
        assert any("not in the alphabet" in e for e in errors)

    @pytest.mark.parametrize("confidence", [-0.1, 1.1, float("nan")])
    def test_confidence_out_of_range(self, confidence):
        errors = prediction_errors(Prediction("yes", confidence), make_schema())
        assert any("not in [0, 1]" in e for e in errors)

    def test_confidence_boundaries_are_included(self):
        assert prediction_errors(Prediction("yes", 0.0), make_schema()) == []
        assert prediction_errors(Prediction("yes", 1.0), make_schema()) == []


class TestCanonicalKey:
    def test_field_order_never_matters(self):
        assert canonical_key({"a": 1, "b": 2}) == canonical_key({"b": 2, "a": 1})

    def test_int_and_equal_float_collapse(self):
        assert canonical_key({"x": 3}) == canonical_key({"x": 3.0})

    def test_negative_zero_collapses(self):
        assert canonical_key({"x": -0.0}) == canonical_key({"x": 0.0})

    def test_bool_never_collapses_with_number(self):
        assert canonical_key({"x": True}) != canonical_key({"x": 1})
        assert canonical_key({"x": False}) != canonical_key({"x": 0})

    def test_string_never_collapses_with_number(self):
        assert canonical_key({"x": "1"}) != canonical_key({"x": 1})

    def test_different_values_differ(self):
        assert canonical_key({"x": [[0, 1]]}) != canonical_key({"x": [[1, 0]]})

    def test_rejects_unrepresentable_values(self):
        with pytest.raises(FormatError):
            canonical_key({"x": {"nested": 1}})

    @settings(suppress_health_check=[HealthCheck.too_slow])
    @given(
        st.dictionaries(
            st.sampled_from(["a", "b", "c"]),
            st.one_of(
                st.booleans(),
                st.integers(-1000, 1000),
                st.floats(allow_nan=False, allow_infinity=False),
                st.text(max_size=5),
            ),
            max_size=3,
        )
    )
    def test_key_is_deterministic_and_order_free(self, fields):
        key = canonical_key(fields)
        assert key == canonical_key(dict(reversed(list(fields.items()))))
        assert key == canonical_key(fields)

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_distinct_floats_get_distinct_keys(self, x):
        # +0.0/-0.0 collapse by design; everything else must stay apart
        if x != 0.0:
            assert canonical_key({"v": x}) != canonical_key({"v": x + abs(x) * 1e-3 + 1.0})


class TestRecordJson:
    def test_round_trip(self):
        record = FeatureRecord({"height": 1.5}, "r1")
        assert record_from_json_dict(record_to_json_dict(record)) == record

    def test_flat_form_without_input_wrapper(self):
        record = record_from_json_dict({"id": "r2", "height": 2.0})
        assert record == FeatureRecord({"height": 2.0}, "r2")

    def test_id_is_optional(self):
        assert record_from_json_dict({"height": 1.0}).id is None

    def test_non_object_rejected(self):
        with pytest.raises(FormatError, match="JSON object"):
            record_from_json_dict([1, 2])

    def test_non_string_id_rejected(self):
        with pytest.raises(FormatError, match="id must be a string"):
            record_from_json_dict({"id": 7, "height": 1.0})

    def test_json_dict_is_json_serializable(self):
        json.dumps(record_to_json_dict(FeatureRecord({"img": [[0, 1]]}, "r")))
