import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from .errors import ConfigError
from .irreducible import count_irreducibles
from .polynomial import as_prime

logger = logging.getLogger(__name__)

MODES = ("exhaustive", "sampled")
FORMATS = ("csv", "json")
DEFAULT_WORK_GUARD = 2**16


@dataclass
class ConfigEntry:
    key: str
    value: str
    line: int


def read_config_file(path: str) -> List[ConfigEntry]:
    """
    Legge un file di configurazione in formato testo "chiave = valore".

    - righe vuote e righe che iniziano con '#' sono ignorate
    - un commento '#' in coda alla riga è rimosso
    - una chiave ripetuta è un errore
    """
    entries: List[ConfigEntry] = []
    seen = set()
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigError(f"impossibile leggere il file di configurazione {path}: {e}") from e

    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: attesa una riga 'chiave = valore'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{number}: chiave vuota")
        if key in seen:
            raise ConfigError(f"{path}:{number}: chiave '{key}' ripetuta")
        seen.add(key)
        entries.append(ConfigEntry(key=key, value=value, line=number))
    return entries


def _parse_optional_int(text: str) -> Optional[int]:
    if text.lower() in ("", "none"):
        return None
    return int(text, 0)


def _parse_optional_str(text: str) -> Optional[str]:
    if text.lower() in ("", "none"):
        return None
    return text


class ExperimentConfig:
    """
    Parametri di un esperimento (indagine sulle coppie o sui loop chiusi).

    I parametri vivono nel dizionario interno
    self._parameters e sono esposti anche come attributi:

        - p, n, n_max: caratteristica e grado (n..n_max se n_max non è None)
        - mode: "exhaustive" | "sampled"
        - samples, seed: numero di campioni e seme a 64 bit (modalità sampled)
        - beta: numero di basi dello schedule (2 = coppie)
        - guard: guardia di enumerazione (None = FFCHAIN_GUARD o default)
        - work_guard: massimo numero di unità di lavoro in modalità exhaustive
        - workers: thread usati per le unità di lavoro
        - output, format: percorso (None = stdout) e formato "csv" | "json"

    Ogni modifica passa da setParameters(), che valida i valori insieme
    prima di applicarli.
    """

    _DEFAULTS: Dict[str, Any] = {
        "p": 2,
        "n": 3,
        "n_max": None,
        "mode": "exhaustive",
        "samples": None,
        "seed": None,
        "beta": 2,
        "guard": None,
        "work_guard": DEFAULT_WORK_GUARD,
        "workers": 1,
        "output": None,
        "format": "csv",
    }

    _PARSERS = {
        "p": lambda s: int(s, 0),
        "n": lambda s: int(s, 0),
        "n_max": _parse_optional_int,
        "mode": str,
        "samples": _parse_optional_int,
        "seed": _parse_optional_int,
        "beta": lambda s: int(s, 0),
        "guard": _parse_optional_int,
        "work_guard": lambda s: int(s, 0),
        "workers": lambda s: int(s, 0),
        "output": _parse_optional_str,
        "format": str,
    }

    def __init__(self, **parameters: Any) -> None:
        self._parameters: Dict[str, Any] = dict(self._DEFAULTS)
        for name, value in self._parameters.items():
            setattr(self, name, value)
        self.setParameters(parameters)

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """
        Costruisce la configurazione da file; i valori non None di overrides
        (tipicamente i flag della CLI) hanno la precedenza sul file.
        """
        values: Dict[str, Any] = {}
        for entry in read_config_file(path):
            parser = cls._PARSERS.get(entry.key)
            if parser is None:
                raise ConfigError(
                    f"{path}:{entry.line}: parametro '{entry.key}' sconosciuto. "
                    f"Parametri validi: {list(cls._DEFAULTS)}"
                )
            try:
                values[entry.key] = parser(entry.value)
            except ValueError as e:
                raise ConfigError(f"{path}:{entry.line}: valore non valido per '{entry.key}': {e}") from e
        if overrides:
            values.update({k: v for k, v in overrides.items() if v is not None})
        logger.debug("configurazione da %s: %s", path, values)
        return cls(**values)

    # --- Gestione parametri ---

    def getListOfParameters(self) -> List[str]:
        return list(self._parameters.keys())

    def getParameters(self) -> Dict[str, Any]:
        return dict(self._parameters)

    def setParameters(self, parameter_dict: Dict[str, Any]) -> None:
        """
        Imposta i parametri da un dizionario {nome_parametro: valore}.

        - nome non riconosciuto -> KeyError
        - combinazione non valida -> ConfigError, nessun valore applicato
        """
        for name in parameter_dict:
            if name not in self._parameters:
                raise KeyError(
                    f"Parametro '{name}' non valido per {type(self).__name__}. "
                    f"Parametri validi: {self.getListOfParameters()}"
                )

        candidate = dict(self._parameters)
        candidate.update(parameter_dict)
        self._validate(candidate)

        for name, value in parameter_dict.items():
            self._parameters[name] = value
            setattr(self, name, value)

    @property
    def degrees(self) -> List[int]:
        last = self.n if self.n_max is None else self.n_max
        return list(range(self.n, last + 1))

    @staticmethod
    def _validate(c: Dict[str, Any]) -> None:
        try:
            as_prime(c["p"])
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if not isinstance(c["n"], int) or c["n"] < 2:
            # con n = 1 non ci sono elementi non costanti
            raise ConfigError(f"n deve essere un intero >= 2, ricevuto {c['n']!r}")
        if c["n_max"] is not None and c["n_max"] < c["n"]:
            raise ConfigError(f"n_max ({c['n_max']}) deve essere >= n ({c['n']})")
        if c["mode"] not in MODES:
            raise ConfigError(f"mode deve essere uno tra {MODES}, ricevuto {c['mode']!r}")
        if c["format"] not in FORMATS:
            raise ConfigError(f"format deve essere uno tra {FORMATS}, ricevuto {c['format']!r}")
        if c["beta"] < 2:
            raise ConfigError(f"beta deve essere >= 2, ricevuto {c['beta']}")
        if c["workers"] < 1:
            raise ConfigError("workers deve essere >= 1")
        if c["work_guard"] < 1:
            raise ConfigError("work_guard deve essere >= 1")
        if c["seed"] is not None and not 0 <= c["seed"] < 2**64:
            raise ConfigError(f"seed deve essere un intero a 64 bit senza segno, ricevuto {c['seed']}")

        last = c["n"] if c["n_max"] is None else c["n_max"]
        if c["mode"] == "sampled":
            if c["samples"] is None or c["samples"] < 1:
                raise ConfigError("la modalità sampled richiede samples >= 1")
            if c["seed"] is None:
                raise ConfigError("la modalità sampled richiede un seed")
        else:
            # beta-uple ordinate di irriducibili distinti, su tutti i gradi
            units = sum(math.perm(count_irreducibles(c["p"], n), c["beta"]) for n in range(c["n"], last + 1))
            if units > c["work_guard"]:
                raise ConfigError(
                    f"exhaustive con p={c['p']}, n={c['n']}..{last}, beta={c['beta']}: "
                    f"{units} unità di lavoro superano work_guard={c['work_guard']}"
                )
