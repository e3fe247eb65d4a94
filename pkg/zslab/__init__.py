# coding: utf-8

__version__ = '0.1.0'
__author__ = 'shibo.huang'

from .group import GroupSpec, Basis, SubgroupLine, CharacterId, make_group, make_basis, standard_basis
from .sequence import Sequence, parse_sequence, parse_sequences, serialize_sequence, read_sequence_file
from .subsum import SubsumTable, ZeroSumWitness, subsums, find_zero_sum, is_zero_sumfree, count_zero_sum_subsequences
from .charsum import AsymptoticParams, spectrum, effective_threshold
from .theorem import analyze_theorem_1_1, reduce_theorem_1_2, reduce_theorem_1_3, Verdict, VerdictKind
from .search import SearchConfig, ExtremalCatalog, max_zero_sumfree_length, verify_property_b, random_zero_sumfree
from .environment import Environment, Settings
from .serialization import json_dumps, parse_dict, BaseModel, Field
from .errors import Error, ErrorInfo, TheoremViolation
from .constants import DEFAULT_LOG_LAYOUT, DEFAULT_LOG_LEVEL, ExitCode
