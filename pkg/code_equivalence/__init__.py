from code_equivalence.cli import main

__all__ = ['main']
