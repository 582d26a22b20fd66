"""Deterministic visibly pushdown automata on infinite words.

Evaluate ultimately periodic words under Buchi, parity, and stair
conditions, compute the minimal stair parity index, decide whether a
stair-Buchi automaton has an equivalent parity automaton, and build that
automaton (or the reduction transducer) explicitly.
"""

from .core import (AcceptanceSpec, AutomatonDescription, CapacityError, Configuration,
                   Dvpa, PartialTableWarning, PartitionedAlphabet, RunTrace,
                   UnknownSymbolError, ValidationError, VpaError, WordClass,
                   classify_word, run_word, validate)
from .diffing import DiffReport, diff, exhaustive_corpus, random_lasso
from .fileformat import ParseError, parse, parse_description, serialize
from .lasso import (LassoProfile, LassoVerdict, LassoWord, accepts, format_lasso,
                    parse_lasso, profile)
from .priority import (PriorityAssignment, PriorityGraph, classification_equivalent,
                       compress_labels, min_priorities, stair_index)
from .stair_removal import (HeightFunction, PatternPresentError, PatternWitness,
                            PrecedesRelation, Reducer, ReducerDomainError, ReducerState,
                            RemovalDecision, TransductionResult, WitnessReplayError,
                            build_parity, chain_heights, check_removable, heights,
                            precedes, product_state_parts, su_reducer, validate_witness)
from .summaries import (AVOID, SEES, CoupledRelation, FlaggedRelation, Reachability,
                        StepGraph, coupled_relations, reachable, step_graph, wm_summaries)

__all__ = [
    "AcceptanceSpec", "AutomatonDescription", "AVOID", "CapacityError", "Configuration",
    "CoupledRelation", "DiffReport", "Dvpa", "FlaggedRelation", "HeightFunction",
    "LassoProfile", "LassoVerdict", "LassoWord", "ParseError", "PartialTableWarning",
    "PartitionedAlphabet", "PatternPresentError", "PatternWitness", "PrecedesRelation",
    "PriorityAssignment", "PriorityGraph", "Reachability", "Reducer", "ReducerDomainError",
    "ReducerState", "RemovalDecision", "RunTrace", "SEES", "StepGraph",
    "TransductionResult", "UnknownSymbolError", "ValidationError", "VpaError", "WordClass",
    "WitnessReplayError", "accepts", "build_parity", "chain_heights", "check_removable",
    "classification_equivalent", "classify_word", "compress_labels", "coupled_relations",
    "diff", "exhaustive_corpus", "format_lasso", "heights", "min_priorities", "parse",
    "parse_description", "parse_lasso", "precedes", "product_state_parts", "profile",
    "random_lasso", "reachable", "run_word", "serialize", "stair_index", "step_graph",
    "su_reducer", "validate", "validate_witness", "wm_summaries",
]

__version__ = "0.1.0"
