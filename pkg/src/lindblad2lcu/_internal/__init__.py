"""Numerical kernels and plumbing shared by the lindblad2lcu modules."""
