"""Numerical core: slicing operator, recovery algorithms and summation engines"""
