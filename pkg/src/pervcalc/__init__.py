"""Exact computations with perverse sheaves on curve germs."""
