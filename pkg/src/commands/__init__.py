"""Subcommands of the chaubox command line."""
