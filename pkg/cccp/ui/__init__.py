# cccp/ui/__init__.py
