# compiler/solidity/__init__.py
from .emitter import EmitOptions, emit_solidity
from .check import structural_check
