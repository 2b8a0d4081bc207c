"""Uniform interpolation for intuitionistic and classical propositional logic.

The intuitionistic interpolants are computed semantically: quantify over
bisimilar Kripke models, describe the resulting class by bounded theories,
then check the candidate with a sequent prover.
"""
from .bisim import (bisimilar, bisimilarity_classes, bounded_bisimilar, bounded_bisimulation,
                    bounded_le, game_value, max_bisimulation)
from .classical import cpc_left_ui, cpc_right_ui
from .config import DEFAULT, Config, ResourceLimitError
from .kripke import (KripkeModel, ModelUniverse, PointedModel, dump_model, enumerate_universe,
                     find_countermodel, forces, parse_model, semantic_class)
from .prover import (Prover, cpc_entails, cpc_equiv, cpc_valid, ipc_entails, ipc_equiv,
                     ipc_valid)
from .quantifiers import (Certificate, DeepeningExhausted, UIRequest, UIResult, class_A,
                          class_E, craig_interpolant, model_completion_axiom,
                          synthesize_chi, uniform_interpolant, uniform_interpolant_set,
                          verify_interpolant)
from .syntax import (BOT, TOP, And, Formula, Imp, Or, ParseError, Var, depth, parse, to_text,
                     varset)
from .theories import build_basis, check_theories_prop, theory_of

__version__ = "0.1.0"
