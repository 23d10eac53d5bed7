# compiler/interpreter/__init__.py
from .machine import Interpreter, init_instance, invoke, run_schedule
from .search import (
    OrderWitness, ReentrancyWitness, SearchBounds, declared_order,
    fully_accepted_permutations, search_order_dependence, search_reentrancy,
)
