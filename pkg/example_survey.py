from ffchain import ExperimentConfig, PairRecord
from ffchain import build_config, run_experiment, spanning_census

# ==========================
# Configurazione generale
# ==========================

P = 2
N = 6
N_MAX = 8
SAMPLES = 100
SEED = 42
OUTPUT = "survey.csv"     # None -> stdout


def build_sampled_config() -> ExperimentConfig:
    """
    Indagine campionata sulle coppie per n = N..N_MAX.
    """
    cfg = build_config(p=P, n=N, n_max=N_MAX, mode="sampled", samples=SAMPLES, seed=SEED)
    # più thread: l'ordine dei record non cambia
    cfg.setParameters({"workers": 4, "output": OUTPUT})
    return cfg


def summarize(records: list[PairRecord]) -> None:
    for n in sorted({r.n for r in records}):
        subset = [r for r in records if r.n == n]
        spanning = sum(r.spanning for r in subset)
        shortest = min(r.min_len for r in subset)
        print(f"n = {n}: {len(subset)} coppie, {spanning} spanning, ciclo minimo {shortest}")


def main():
    records = run_experiment(build_sampled_config())
    summarize(records)

    census = spanning_census(P, N)
    print(f"censimento esatto n = {N}: {census.spanning}/{census.total} coppie ordinate spanning")


if __name__ == "__main__":
    main()
