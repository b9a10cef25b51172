"""Code related to CLI commands for lindblad2lcu."""
