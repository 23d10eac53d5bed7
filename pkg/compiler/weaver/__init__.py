# compiler/weaver/__init__.py
from .weave import apply_plugins, relax_for_plugins
