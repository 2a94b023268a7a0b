"""Algèbre exacte: scalaires rationnels, g simple, L(g) tronquée."""
