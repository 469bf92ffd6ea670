"""Exact and anytime inference for function-free probabilistic logic programs.

Lineage formulas for every derived atom are built bottom-up (naively,
semi-naively, or guided by a magic-sets rewrite of the query), kept as
canonical decision diagrams, and turned into probabilities by weighted
model counting.
"""
from .errors import (CompilationBlowup, EnumerationCapExceeded, ParseError,
                     ProgramError, TcplogError, UnknownPredicate)
from .evaluator import (ParamInterp, b_set, d_set, delta_tcp, naive_fixpoint,
                        scp_fixpoint, tcp_step)
from .formula import Formula, FormulaManager, probability_weights
from .logic import (Atom, Const, ProbProgram, Rule, Var, apply_subst, atom,
                    herbrand_base, match_atom)
from .magic import (MagicProgram, adorn, magic_transform, mcp_fixpoint,
                    partition_rules, solve)
from .oracle import boolean_tp_least_model, brute_wmc, enumerate_prob
from .parser import parse_program, parse_query, render_program
from .report import Answer, SolveReport

__version__ = "0.1.0"
