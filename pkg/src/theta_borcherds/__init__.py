"""Borcherds products of binary, quaternary and octonary theta functions."""
