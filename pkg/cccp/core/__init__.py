# cccp/core/__init__.py
