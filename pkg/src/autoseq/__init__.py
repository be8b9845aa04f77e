"""Automatic sequences, constant-length substitutions and their d-dimensional analogues.

Exact arithmetic (``fractions.Fraction``) wherever a quantity is rational;
numpy arrays for long prefixes and windows.
"""
from .words import Alphabet, Morphism, Word, apply_morphism, compose, incidence_matrix
from .numeration import NumerationSystem, greedy_rep, value, pad, encode_tuple, decode_tuple
from .automata import (Automaton, RecognizableSet, accepts, automaton_to_substitution,
                       enumerate_members, is_padding_invariant, member, normalize_for_conversion,
                       substitution_to_automaton)
from .substitution import (Coding, Substitution, coded_prefix, fixed_point_prefix,
                           k_block_substitution, language, periodic_to_substitution,
                           primitive_component, validate)
from .perron import (letter_frequencies, perron_data, two_block_frequencies, verify_theta_scaling,
                     word_frequencies)
from .recurrence import (check_linrec_props, complexity, density_search, is_ultimately_periodic,
                         lr_constant_estimate, multiplicatively_independent, return_words)
from .ndsub import (ArrayWindow, NdSubstitution, Pattern, cube_frequencies, expand, fixed_array,
                    pattern_frequency, spacing_and_repetitivity_check, verify_freq_array)
from .definability import (LocalPeriodicityWitness, PseudoWitness, SemilinearSet,
                           check_locally_periodic, check_pseudo_periodic, muchnik_equivalence)
from .factor_maps import (BlockMap, NdBlockMap, apply_block_map, check_factor_lr, cobham_demo,
                          factor_frequencies, preimages, recode)

__all__ = [
    "Alphabet",
    "Morphism",
    "Word",
    "apply_morphism",
    "compose",
    "incidence_matrix",
    "NumerationSystem",
    "greedy_rep",
    "value",
    "pad",
    "encode_tuple",
    "decode_tuple",
    "Automaton",
    "RecognizableSet",
    "accepts",
    "automaton_to_substitution",
    "enumerate_members",
    "is_padding_invariant",
    "member",
    "normalize_for_conversion",
    "substitution_to_automaton",
    "Coding",
    "Substitution",
    "coded_prefix",
    "fixed_point_prefix",
    "k_block_substitution",
    "language",
    "periodic_to_substitution",
    "primitive_component",
    "validate",
    "letter_frequencies",
    "perron_data",
    "two_block_frequencies",
    "verify_theta_scaling",
    "word_frequencies",
    "check_linrec_props",
    "complexity",
    "density_search",
    "is_ultimately_periodic",
    "lr_constant_estimate",
    "multiplicatively_independent",
    "return_words",
    "ArrayWindow",
    "NdSubstitution",
    "Pattern",
    "cube_frequencies",
    "expand",
    "fixed_array",
    "pattern_frequency",
    "spacing_and_repetitivity_check",
    "verify_freq_array",
    "LocalPeriodicityWitness",
    "PseudoWitness",
    "SemilinearSet",
    "check_locally_periodic",
    "check_pseudo_periodic",
    "muchnik_equivalence",
    "BlockMap",
    "NdBlockMap",
    "apply_block_map",
    "check_factor_lr",
    "cobham_demo",
    "factor_frequencies",
    "preimages",
    "recode",
]

__version__ = "0.1.0"
