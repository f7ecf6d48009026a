# This file makes 'calculus' a Python package.

from .arith import (
    FactoredInteger, factorize, omega, omega1, k_value, binomial, ws, p_part, e_sol, decimal_string,
    parse_degree, MAX_INPUT
)
from .threshold import threshold, threshold_interval
from .partitions import Partition, unordered_partitions, compositions
