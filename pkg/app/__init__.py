"""Atelier exact pour l'algèbre de Lie affine-Virasoro L(g)."""
