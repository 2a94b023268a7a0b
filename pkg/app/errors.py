"""Exceptions de l'atelier. Toutes dérivent de ValueError via AffvirError."""


class AffvirError(ValueError):
    """Erreur de base (entrée invalide ou problème mal posé)."""


class InvalidCartanMatrix(AffvirError):
    pass


class UnsupportedRank(AffvirError):
    pass


class WindowError(AffvirError):
    """Indice hors fenêtre, ou fenêtre trop petite pour le problème."""


class DimensionMismatch(AffvirError):
    pass


class InvalidProblem(AffvirError):
    pass


class ConfigError(AffvirError):
    pass
