import csv
import json
import logging
import sys
import threading
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Generator, List, Optional, Sequence, TextIO

import numpy as np

from .errors import ConfigError
from .experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)


def format_fraction(value: Fraction, places: int = 6) -> str:
    """Rende un razionale non negativo con `places` decimali (arrotondamento half-up)."""
    if value < 0:
        raise ValueError("format_fraction accetta solo valori >= 0")
    scale = 10**places
    scaled = value * scale
    rounded = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    whole, frac = divmod(rounded, scale)
    return f"{whole}.{frac:0{places}d}" if places else str(whole)


class BaseExperiment(ABC):
    """
    ABC per gli esperimenti (indagine sulle coppie, indagine sui loop chiusi).

    Gestisce:
    - le unità di lavoro (coppie o schedule), limitate da work_guard già in configurazione
    - i flussi casuali per unità, derivati da (seed, n, indice dell'unità)
    - l'esecuzione, eventualmente su più thread, in ordine canonico
    - la scrittura in streaming su CSV o JSON

    Le sottoclassi DEVONO implementare:
        _work_units()
        _run_unit(unit)
        _csv_header()
        _csv_row(record)
        _json_record(record)
    """

    def __init__(self, config: ExperimentConfig) -> None:
        self.config = config

        # Lock per la scrittura dei record
        self.lock = threading.Lock()

        self.records: List[Any] = []
        self._out: Optional[TextIO] = None
        self._csv_writer = None
        self._json_first = True

    # --------- Metodi astratti da implementare nelle sottoclassi ----------

    @abstractmethod
    def _work_units(self) -> List[Any]:
        """Unità di lavoro in ordine canonico (l'ordine dei record in uscita)."""

    @abstractmethod
    def _run_unit(self, unit: Any) -> Any:
        """Elabora un'unità e restituisce il record corrispondente."""

    @abstractmethod
    def _csv_header(self) -> Sequence[str]:
        pass

    @abstractmethod
    def _csv_row(self, record: Any) -> Sequence[Any]:
        pass

    @abstractmethod
    def _json_record(self, record: Any) -> dict:
        pass

    # ---------------- Metodi concreti comuni ------------------------------

    def _rng_for(self, n: int, index: int) -> np.random.Generator:
        """Flusso indipendente per l'unità (n, index), derivato dal seed principale."""
        seed = self.config.seed if self.config.seed is not None else 0
        return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, index)))

    def _results(self, units: Sequence[Any]) -> Generator[Any, None, None]:
        if self.config.workers == 1:
            yield from map(self._run_unit, units)
            return
        # map() del pool restituisce i risultati nell'ordine delle unità,
        # ciascuno appena pronto: i record si scrivono mentre il pool lavora
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            yield from executor.map(self._run_unit, units)

    def run(self, stream: Optional[TextIO] = None) -> List[Any]:
        """
        Esegue tutte le unità e scrive i record man mano.

        stream: destinazione esplicita; se None si usa config.output
                (o stdout se anche questo è None).
        """
        units = self._work_units()
        logger.info("%s: %d unità di lavoro", type(self).__name__, len(units))

        self.records = []
        self._open(stream)
        results = self._results(units)
        try:
            for record in results:
                self._write(record)
                self.records.append(record)
        finally:
            results.close()
            self._close(stream)
        logger.info("%s: scritti %d record", type(self).__name__, len(self.records))
        return self.records

    def _open(self, stream: Optional[TextIO]) -> None:
        if stream is not None:
            self._out = stream
        elif self.config.output is None:
            self._out = sys.stdout
        else:
            try:
                self._out = open(self.config.output, mode="w", newline="", encoding="utf-8")
            except OSError as e:
                raise ConfigError(f"impossibile scrivere {self.config.output}: {e}") from e

        if self.config.format == "csv":
            self._csv_writer = csv.writer(self._out, lineterminator="\n")
            self._csv_writer.writerow(self._csv_header())
        else:
            self._out.write("[")
            self._json_first = True

    def _write(self, record: Any) -> None:
        with self.lock:
            if self.config.format == "csv":
                self._csv_writer.writerow(self._csv_row(record))
            else:
                prefix = "\n" if self._json_first else ",\n"
                self._out.write(prefix + json.dumps(self._json_record(record)))
                self._json_first = False
            self._out.flush()

    def _close(self, stream: Optional[TextIO]) -> None:
        if self._out is None:
            return
        if self.config.format == "json":
            self._out.write("\n]\n" if not self._json_first else "]\n")
        self._out.flush()
        if stream is None and self.config.output is not None:
            self._out.close()
        self._out = None
        self._csv_writer = None

