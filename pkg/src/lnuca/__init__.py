"""Decision procedures for linear non-uniform cellular automata over finite fields."""

__version__ = "0.1.0"
