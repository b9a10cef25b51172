"""The implementation and API for lindblad2lcu."""
