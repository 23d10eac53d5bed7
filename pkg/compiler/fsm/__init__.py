# compiler/fsm/__init__.py
from .validate import validate
from .graph import reachable_states, transition_graph
from .paths import resolve_node_path
from .typecheck import TypeEnv, body_env, contract_env, guard_env, infer
