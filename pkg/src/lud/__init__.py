"""Underspecified DRS descriptions: parsing, scope enumeration, resolution, rendering."""
from .core import (
    Alfa,
    DiscRel,
    Dm,
    Grouping,
    Leq,
    LudError,
    LudRepresentation,
    Modifies,
    Mode,
    Mood,
    Neg,
    Plugging,
    Pred,
    Role,
    Verdict,
    is_admissible,
    pluggable_labels,
    validate,
)
from .drs import DrsBox, build_drs, render_box, render_term
from .engine import EnumerationOptions, enumerate_oracle, enumerate_pluggings, verify_equivalence
from .parser import ParseError, parse, parse_plugging, serialize
from .resolver import (
    AnaphoricityClass,
    LexiconEntry,
    RankedPluggings,
    classify,
    default_lexicon,
    discrel_order,
    insert_mode,
    resolve,
)

__version__ = "0.1.0"
