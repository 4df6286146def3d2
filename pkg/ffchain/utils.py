import logging
from typing import Any, Dict, List, Optional, Sequence, TextIO

from .base_experiment import BaseExperiment
from .chain_engine import BasisSchedule
from .experiment_config import ExperimentConfig
from .irreducible import make_irreducible
from .loop_survey import LoopSurvey
from .pair_survey import PairSurvey
from .polynomial import IrreduciblePoly, Poly, parse_poly

logger = logging.getLogger(__name__)


# ==========================
# Costruzione degli oggetti
def build_basis(text: str, p: int, guard: Optional[int] = None) -> IrreduciblePoly:
    """
    Interpreta una base in forma simbolica ("x^3+x+1") o indicizzata ("#11")
    e verifica che sia monica e irriducibile.
    """
    return make_irreducible(parse_poly(text, p), guard)


def build_schedule(texts: Sequence[str], p: int, guard: Optional[int] = None) -> BasisSchedule:
    return BasisSchedule(tuple(build_basis(t, p, guard) for t in texts))


def build_element(text: str, p: int) -> Poly:
    return parse_poly(text, p)


def build_config(config_path: Optional[str] = None, **parameters: Any) -> ExperimentConfig:
    """
    Crea la configurazione di un esperimento:
        - da file "chiave = valore" se config_path è dato (i parametri non None prevalgono)
        - altrimenti dai soli parametri
    """
    if config_path is not None:
        return ExperimentConfig.from_file(config_path, overrides=parameters)
    values: Dict[str, Any] = {k: v for k, v in parameters.items() if v is not None}
    return ExperimentConfig(**values)


def build_experiment(cfg: ExperimentConfig) -> BaseExperiment:
    # beta = 2 -> coppie, beta >= 3 -> loop chiusi
    if cfg.beta == 2:
        return PairSurvey(cfg)
    return LoopSurvey(cfg)


# ==========================
# Esecuzione
def run_experiment(cfg: ExperimentConfig, stream: Optional[TextIO] = None) -> List[Any]:
    """
    Esegue l'esperimento descritto da cfg e scrive i record su stream
    (o su cfg.output, o su stdout).
    """
    experiment = build_experiment(cfg)
    logger.info(
        "esperimento %s: p=%d n=%s mode=%s",
        type(experiment).__name__,
        cfg.p,
        cfg.degrees,
        cfg.mode,
    )
    return experiment.run(stream)
