"""Decision procedures for the conditional logics CK, CK+ID, CK+MP, CK+MP+ID."""
