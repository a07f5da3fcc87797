"""Session language, command dispatcher and verification suite."""
