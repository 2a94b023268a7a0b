"""Solveurs exacts: dérivations, bidérivations, structures post-Lie commutatives."""
