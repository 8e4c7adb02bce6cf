"""Exactly enumerable example laws."""
from .dissection import DissectionSpec, SizeClass, dissection_counts, dissection_law, dissection_model, dissection_series
from .empirical import empirical_model
from .grammar import (GrammarSpec, check_unambiguous, enumerate_derivations, example_grammar, grammar_counts,
                      grammar_law, grammar_model)
from .iid import (bernoulli_step, binomial_model, correlated_model, correlated_step, iid_model, iid_sum_law,
                  parse_step_law)
from .rademacher import rademacher_demo, rademacher_law, rademacher_model, step_cdf_distance

__all__ = [
    "DissectionSpec", "SizeClass", "dissection_counts", "dissection_law", "dissection_model", "dissection_series",
    "empirical_model", "GrammarSpec", "check_unambiguous", "enumerate_derivations", "example_grammar",
    "grammar_counts", "grammar_law", "grammar_model", "bernoulli_step", "binomial_model", "correlated_model",
    "correlated_step", "iid_model", "iid_sum_law", "parse_step_law", "rademacher_demo", "rademacher_law",
    "rademacher_model", "step_cdf_distance",
]
