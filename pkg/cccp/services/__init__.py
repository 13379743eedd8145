# cccp/services/__init__.py
