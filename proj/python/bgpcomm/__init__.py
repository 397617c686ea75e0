"""BGP communities anomaly detection engine."""

from ._core import (
    Community,
    ConfigError,
    Dictionary,
    DictionaryError,
    ParseError,
    Prefix,
    ScenarioError,
    UnsupportedCommunityForm,
    bin_index,
    check_valley_free,
    collapse_prepending,
    format_community,
    generate,
    load_dictionary,
    parse_community,
    parse_dictionary,
    parse_prefix,
    parse_record,
    prefix_covers,
    run_pipeline,
)

__all__ = [
    "Community",
    "ConfigError",
    "Dictionary",
    "DictionaryError",
    "ParseError",
    "Prefix",
    "ScenarioError",
    "UnsupportedCommunityForm",
    "bin_index",
    "check_valley_free",
    "collapse_prepending",
    "format_community",
    "generate",
    "load_dictionary",
    "parse_community",
    "parse_dictionary",
    "parse_prefix",
    "parse_record",
    "prefix_covers",
    "run_pipeline",
]
