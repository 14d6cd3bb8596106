"""Records, transformations, classifiers, and partial behavioural specs."""
from .classifiers import (
    Classifier,
    ExpressionClassifier,
    SubprocessClassifier,
    TableClassifier,
    classifier_from_json_dict,
    classifier_to_json_dict,
    classify,
    load_classifier,
)
from .records import (
    FeatureRecord,
    Prediction,
    canonical_key,
    conformance_errors,
    prediction_errors,
    record_from_json_dict,
    record_to_json_dict,
)
from .spec import (
    MeanConstraint,
    MetamorphicResult,
    PartialSpec,
    ProbConstraint,
    RangeConstraint,
    WellFormednessReport,
    check_equivariant,
    check_invariant,
    check_necessary,
    check_post,
    check_pre,
    check_sufficient,
    load_spec,
    load_spec_lenient,
    spec_from_json_dict,
    spec_to_json_dict,
    static_errors,
    validate_spec,
)
from .transforms import (
    AddOffset,
    FieldMap,
    IdentityOutput,
    LabelMap,
    OutputTransform,
    Scale,
    SetField,
    ShiftGrid,
    Transformation,
    apply_output_transform,
    apply_transformation,
    output_transform_from_json_dict,
    output_transform_to_json_dict,
    transformation_from_json_dict,
    transformation_to_json_dict,
    validate_output_transform,
    validate_transformation,
)

__all__ = [
    "AddOffset",
    "Classifier",
    "ExpressionClassifier",
    "FeatureRecord",
    "FieldMap",
    "IdentityOutput",
    "LabelMap",
    "MeanConstraint",
    "MetamorphicResult",
    "OutputTransform",
    "PartialSpec",
    "Prediction",
    "ProbConstraint",
    "RangeConstraint",
    "Scale",
    "SetField",
    "ShiftGrid",
    "SubprocessClassifier",
    "TableClassifier",
    "Transformation",
    "WellFormednessReport",
    "apply_output_transform",
    "apply_transformation",
    "canonical_key",
    "check_equivariant",
    "check_invariant",
    "check_necessary",
    "check_post",
    "check_pre",
    "check_sufficient",
    "classifier_from_json_dict",
    "classifier_to_json_dict",
    "classify",
    "conformance_errors",
    "load_classifier",
    "load_spec",
    "load_spec_lenient",
    "prediction_errors",
    "record_from_json_dict",
    "record_to_json_dict",
    "spec_from_json_dict",
    "spec_to_json_dict",
    "static_errors",
    "transformation_from_json_dict",
    "transformation_to_json_dict",
    "validate_output_transform",
    "validate_spec",
    "validate_transformation",
]
