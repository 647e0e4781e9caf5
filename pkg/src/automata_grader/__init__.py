"""Parse, validate, run and grade textbook DFA, PDA and TM definitions."""
