# Coprimator
# src/__init__.py
