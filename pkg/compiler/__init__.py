# compiler/__init__.py
