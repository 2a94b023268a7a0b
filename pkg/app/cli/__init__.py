"""Ligne de commande affvir et schéma du rapport."""
