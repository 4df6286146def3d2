"""
Eccezioni del pacchetto ffchain.

Tutti gli errori di dominio derivano da FFChainError, che a sua volta deriva da
ValueError: chi intercetta ValueError per i parametri non validi continua a funzionare.

InternalInvariantError NON deriva da FFChainError: segnala uno stato che non
dovrebbe mai verificarsi se l'implementazione è corretta.
"""

from typing import Optional


class FFChainError(ValueError):
    """Radice degli errori di dominio (input non valido, precondizione violata)."""


class NotPrimeError(FFChainError):
    pass


class CharacteristicMismatchError(FFChainError):
    pass


class DegreeError(FFChainError):
    pass


class ZeroInverseError(FFChainError):
    pass


class NotMonicError(FFChainError):
    pass


class NotIrreducibleError(FFChainError):
    """
    Il polinomio passato come base non è irriducibile.

    factor: un fattore non banale (monico) se è stato possibile trovarlo
            con la divisione per tentativi, altrimenti None.
    """

    def __init__(self, message: str, factor: Optional[object] = None) -> None:
        super().__init__(message)
        self.factor = factor


class DuplicateBasisError(FFChainError):
    pass


class ConstantElementError(FFChainError):
    pass


class GuardExceededError(FFChainError):
    pass


class PolyParseError(FFChainError):
    pass


class OrientationError(FFChainError):
    pass


class ConfigError(FFChainError):
    pass


class InternalInvariantError(RuntimeError):
    pass
