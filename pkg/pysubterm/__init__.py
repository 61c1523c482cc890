from .dpframework import (DPProblem, dependency_pairs,
                          estimated_dependency_graph, sccs)
from .encoding import Multiprojection, apply_projection, encode_problem
from .prover import ProofTree, prove_termination, replay_proof
from .read_trs import parse_trs, read_trs
from .smt import ExternalSolver, InternalSolver
from . import utils

__version__ = '0.1.0'

__all__ = ['DPProblem',
           'ExternalSolver',
           'InternalSolver',
           'Multiprojection',
           'ProofTree',
           'apply_projection',
           'dependency_pairs',
           'encode_problem',
           'estimated_dependency_graph',
           'parse_trs',
           'prove_termination',
           'read_trs',
           'replay_proof',
           'sccs',
           'utils']
