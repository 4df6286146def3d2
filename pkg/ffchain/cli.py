"""
Interfaccia a riga di comando di ffchain.

    ffchain inv --basis "x^3+x+1" --elem "x^2+x+1"
    ffchain partition --f1 "#11" --f2 "#13" --format json
    ffchain loops --basis "#19" --basis "#25" --basis "#31" --elem "#7"
    ffchain survey --n 8 --samples 100 --seed 42

Codici di uscita: 0 successo, 1 errore di dominio (base riducibile, elemento
nullo, guardia superata, ...), 2 errore d'uso (flag, letterali non validi).
"""

import csv
import io
import json
import logging
import sys
from typing import Any, Callable, Iterable, List, Optional, Sequence

import click

from .chain_engine import BasisSchedule, enumerate_closed_loops, find_closed_loop, k_chain, partition
from .errors import FFChainError, PolyParseError
from .experiment_config import FORMATS as SURVEY_FORMATS
from .experiment_config import MODES
from .graph_export import build_matching, export_dot, graph_to_json, loop_graph, union_graph
from .irreducible import count_irreducibles, enumerate_irreducibles
from .pair_survey import spanning_census
from .permutation import build_permutation
from .polynomial import GUARD_ENV_VAR, IrreduciblePoly, Poly, as_prime, format_poly, inv
from .utils import build_basis, build_config, build_element, build_schedule, run_experiment

logger = logging.getLogger(__name__)


class FFChainGroup(click.Group):
    """Gruppo click che traduce le eccezioni del dominio in codici di uscita."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except PolyParseError as e:
            raise click.UsageError(str(e), ctx) from e
        except (FFChainError, OSError) as e:
            click.echo(f"Errore: {e}", err=True)
            ctx.exit(1)


# --- Opzioni condivise ---

def _field_options(formats: Sequence[str], default_format: str = "text") -> Callable:
    """--p, --n, --format, --out, --guard comuni a tutti i sottocomandi."""

    def decorator(f: Callable) -> Callable:
        f = click.option("--guard", type=click.IntRange(min=1), default=None,
                         help=f"Guardia di enumerazione (default: ${GUARD_ENV_VAR} o 2^20).")(f)
        f = click.option("--out", "out", type=click.Path(dir_okay=False), default=None,
                         help="File di uscita (default: stdout).")(f)
        f = click.option("--format", "fmt", type=click.Choice(formats), default=default_format,
                         show_default=True, help="Formato di uscita.")(f)
        f = click.option("--n", "n", type=click.IntRange(min=1), default=None,
                         help="Grado delle basi (dedotto dalle basi se omesso).")(f)
        f = click.option("--p", "p", type=int, default=2, show_default=True,
                         help="Caratteristica del campo (primo).")(f)
        return f

    return decorator


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("risultato scritto in %s", out)


def _json_text(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _labelled(poly: Poly) -> str:
    return f"{format_poly(poly)} ({format_poly(poly, 'indexed')})"


def _indexed(polys: Iterable[Poly]) -> str:
    return " ".join(format_poly(a, "indexed") for a in polys)


def _bases(texts: Sequence[str], p: int, n: Optional[int], guard: Optional[int]) -> List[IrreduciblePoly]:
    """Basi validate (moniche, irriducibili) e coerenti con --n."""
    as_prime(p)
    bases = [build_basis(t, p, guard) for t in texts]
    degrees = sorted({f.degree for f in bases})
    if len(degrees) > 1:
        raise click.UsageError(f"le basi hanno gradi diversi: {degrees}")
    if n is not None and degrees and degrees[0] != n:
        raise click.UsageError(f"--n {n} in conflitto con il grado delle basi ({degrees[0]})")
    return bases


def _schedule(texts: Sequence[str], p: int, n: Optional[int], guard: Optional[int]) -> BasisSchedule:
    # gradi incoerenti sono errori d'uso: si controllano prima di costruire lo schedule
    _bases(texts, p, n, guard)
    return build_schedule(texts, p, guard)


# --- Comandi ---

@click.group(cls=FFChainGroup)
@click.option("-v", "--verbose", count=True, help="Più dettagli nel log (ripetibile).")
@click.version_option(package_name="ffchain")
def main(verbose: int) -> None:
    """Catene di inversi moltiplicativi nei campi finiti F_p[X]/(f)."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


@main.command("inv")
@_field_options(("text", "json"))
@click.option("--basis", required=True, help="Base irriducibile monica (es. \"x^3+x+1\" o \"#11\").")
@click.option("--elem", required=True, help="Elemento da invertire.")
def cmd_inv(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
            basis: str, elem: str) -> None:
    """Inverso moltiplicativo di un elemento modulo una base."""
    (f,) = _bases([basis], p, n, guard)
    a = build_element(elem, p)
    b = inv(a, f)
    if fmt == "json":
        _emit(_json_text({
            "p": p,
            "n": f.degree,
            "basis": format_poly(f.poly, "indexed"),
            "elem": format_poly(a, "indexed"),
            "inverse": format_poly(b, "indexed"),
        }), out)
    else:
        _emit(_labelled(b) + "\n", out)


@main.command("chain")
@_field_options(("text", "json", "csv"))
@click.option("--basis", "bases", multiple=True, required=True,
              help="Base dello schedule (ripetibile, nell'ordine f1, f2, ...).")
@click.option("--elem", required=True, help="Elemento iniziale a_0.")
@click.option("--k", "k", type=click.IntRange(min=0), required=True, help="Numero di passi.")
def cmd_chain(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
              bases: Sequence[str], elem: str, k: int) -> None:
    """k-catena di inversi a partire da un elemento."""
    schedule = _schedule(bases, p, n, guard)
    chain = k_chain(build_element(elem, p), schedule, k)
    if fmt == "json":
        _emit(_json_text(chain.to_dict()), out)
    elif fmt == "csv":
        rows = []
        for i, a in enumerate(chain.elements):
            basis = "" if i == 0 else format_poly(schedule.basis_for_step(i).poly, "indexed")
            rows.append([i, basis, format_poly(a, "indexed"), format_poly(a)])
        _emit(_csv_text(("i", "basis", "index", "element"), rows), out)
    else:
        _emit("".join(f"a_{i} = {_labelled(a)}\n" for i, a in enumerate(chain.elements)), out)


@main.command("partition")
@_field_options(("text", "json", "csv"))
@click.option("--f1", required=True, help="Prima base.")
@click.option("--f2", required=True, help="Seconda base.")
def cmd_partition(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
                  f1: str, f2: str) -> None:
    """Partizione degli elementi non costanti nei cicli di (f1, f2)."""
    g1, g2 = _bases([f1, f2], p, n, guard)
    part = partition(g1, g2, guard)
    if fmt == "json":
        _emit(_json_text(part.to_dict()), out)
    elif fmt == "csv":
        rows = [[i, len(c), _indexed(c.elements)] for i, c in enumerate(part.cycles, start=1)]
        _emit(_csv_text(("cycle", "len", "elements"), rows), out)
    else:
        lines = [f"ciclo {i} (len {len(c)}): {_indexed(c.elements)}" for i, c in enumerate(part.cycles, start=1)]
        lines.append(f"{len(part.cycles)} cicli, {part.covered} elementi coperti")
        _emit("\n".join(lines) + "\n", out)


@main.command("perm")
@_field_options(("text", "json"))
@click.option("--f1", required=True, help="Prima base.")
@click.option("--f2", required=True, help="Seconda base.")
@click.option("--orientation", default="canonical", show_default=True,
              help="'canonical' o un bit per ciclo (1 = verso opposto).")
def cmd_perm(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
             f1: str, f2: str, orientation: str) -> None:
    """Permutazione di S_{p^n} definita dai cicli orientati di (f1, f2)."""
    g1, g2 = _bases([f1, f2], p, n, guard)
    sigma = build_permutation(g1, g2, orientation, guard)
    if fmt == "json":
        data = sigma.to_dict()
        data["cycle_type"] = list(sigma.cycle_type)
        _emit(_json_text(data), out)
    else:
        cycles = "".join("(" + " ".join(str(e) for e in c) + ")" for c in sigma.cycle_decomposition)
        lines = [
            f"cicli: {cycles or '()'}",
            f"punti fissi: {' '.join(str(e) for e in sigma.fixed_points)}",
            f"tipo di ciclo: {list(sigma.cycle_type)}",
        ]
        _emit("\n".join(lines) + "\n", out)


@main.command("loops")
@_field_options(("text", "json", "dot"))
@click.option("--basis", "bases", multiple=True, required=True,
              help="Base dello schedule (ripetibile, almeno due basi distinte).")
@click.option("--elem", default=None, help="Elemento iniziale; se omesso si enumerano tutti i loop.")
def cmd_loops(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
              bases: Sequence[str], elem: Optional[str]) -> None:
    """Loop chiuso di un elemento, o censimento di tutti i loop dello schedule."""
    schedule = _schedule(bases, p, n, guard)
    if elem is not None:
        loop = find_closed_loop(build_element(elem, p), schedule)
        if fmt == "json":
            _emit(_json_text(loop.to_dict()), out)
        elif fmt == "dot":
            _emit(export_dot(loop, name="loop"), out)
        else:
            repeated = sorted((a.index, m) for a, m in loop.multiplicities.items() if m > 1)
            lines = [
                f"k = {loop.k} (k mod {schedule.beta} = {loop.k % schedule.beta})",
                f"elementi: {_indexed(loop.elements)}",
                f"elementi distinti: {len(loop.multiplicities)}",
            ]
            if repeated:
                lines.append("ripetuti: " + " ".join(f"#{e}x{m}" for e, m in repeated))
            _emit("\n".join(lines) + "\n", out)
        return

    if fmt == "dot":
        raise click.UsageError("--format dot richiede --elem (un singolo loop)")
    census = enumerate_closed_loops(schedule, guard)
    if fmt == "json":
        _emit(_json_text(census.to_dict()), out)
    else:
        lines = [f"loop {i} (k = {loop.k}): {_indexed(loop.elements)}" for i, loop in enumerate(census.loops)]
        lines.append(f"{len(census.loops)} loop, copertura stati {census.state_coverage}")
        _emit("\n".join(lines) + "\n", out)


@main.command("irreducibles")
@_field_options(("text", "json", "csv"))
@click.option("--count-only", is_flag=True, help="Stampa solo il numero di polinomi.")
def cmd_irreducibles(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
                     count_only: bool) -> None:
    """Polinomi monici irriducibili di grado n su F_p."""
    if n is None:
        raise click.UsageError("irreducibles richiede --n")
    as_prime(p)
    if count_only:
        count = count_irreducibles(p, n)
        _emit(_json_text({"p": p, "n": n, "count": count}) if fmt == "json" else f"{count}\n", out)
        return
    polys = enumerate_irreducibles(p, n, guard)
    if fmt == "json":
        _emit(_json_text({
            "p": p,
            "n": n,
            "count": len(polys),
            "polynomials": [format_poly(f.poly, "indexed") for f in polys],
        }), out)
    elif fmt == "csv":
        _emit(_csv_text(("index", "polynomial"), ([f.index, format_poly(f.poly)] for f in polys)), out)
    else:
        _emit("".join(_labelled(f.poly) + "\n" for f in polys), out)


@main.command("export")
@_field_options(("dot", "json"), default_format="dot")
@click.option("--basis", "bases", multiple=True, required=True,
              help="Base (una = matching, più basi = unione dei matching).")
@click.option("--elem", default=None, help="Con almeno due basi: esporta il loop chiuso di questo elemento.")
@click.option("--include-constants", is_flag=True, help="Include le costanti non nulle nei matching.")
def cmd_export(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
               bases: Sequence[str], elem: Optional[str], include_constants: bool) -> None:
    """Esporta in DOT o JSON i grafi degli inversi."""
    if elem is not None:
        schedule = _schedule(bases, p, n, guard)
        graph = loop_graph(find_closed_loop(build_element(elem, p), schedule))
        name = "loop"
    else:
        polys = _bases(bases, p, n, guard)
        graph = union_graph(*(build_matching(f, include_constants, guard) for f in polys))
        name = "matching" if len(polys) == 1 else "union"
    _emit(export_dot(graph, name=name) if fmt == "dot" else _json_text(graph_to_json(graph)), out)


@main.command("census")
@_field_options(("text", "json", "csv"))
@click.option("--work-guard", type=click.IntRange(min=1), default=2**16, show_default=True,
              help="Massimo numero di coppie ordinate.")
def cmd_census(p: int, n: Optional[int], fmt: str, out: Optional[str], guard: Optional[int],
               work_guard: int) -> None:
    """Frazione delle coppie ordinate con un unico ciclo che copre tutti i non costanti."""
    if n is None:
        raise click.UsageError("census richiede --n")
    as_prime(p)
    census = spanning_census(p, n, guard, work_guard)
    if fmt == "json":
        _emit(_json_text(census.to_dict()), out)
    elif fmt == "csv":
        rows = (
            [f"#{a}", f"#{b}", "true" if s else "false"] for (a, b), s in sorted(census.table.items())
        )
        _emit(_csv_text(("f1", "f2", "spanning"), rows), out)
    else:
        frac = census.fraction
        lines = [
            f"coppie ordinate spanning: {census.spanning}/{census.total} ({frac.numerator}/{frac.denominator})",
            f"coppie non ordinate spanning: {census.spanning_unordered}/{census.total_unordered}",
        ]
        _emit("\n".join(lines) + "\n", out)


@main.command("survey")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File 'chiave = valore'; i flag hanno la precedenza.")
@click.option("--p", "p", type=int, default=None, help="Caratteristica (default 2).")
@click.option("--n", "n", type=int, default=None, help="Grado (default 3).")
@click.option("--n-max", "n_max", type=int, default=None, help="Grado massimo: indaga n..n_max.")
@click.option("--mode", type=click.Choice(MODES), default=None,
              help="exhaustive (default) o sampled (implicito con --samples).")
@click.option("--samples", type=int, default=None, help="Numero di campioni (modalità sampled).")
@click.option("--seed", type=int, default=None, help="Seme a 64 bit.")
@click.option("--beta", type=int, default=None, help="Numero di basi (2 = coppie, >= 3 = loop chiusi).")
@click.option("--guard", type=int, default=None, help="Guardia di enumerazione.")
@click.option("--work-guard", "work_guard", type=int, default=None, help="Massimo numero di unità (exhaustive).")
@click.option("--workers", type=int, default=None, help="Thread di lavoro.")
@click.option("--out", "output", type=click.Path(dir_okay=False), default=None, help="File di uscita.")
@click.option("--format", "fmt", type=click.Choice(SURVEY_FORMATS), default=None, help="csv (default) o json.")
def cmd_survey(config_path: Optional[str], p: Optional[int], n: Optional[int], n_max: Optional[int],
               mode: Optional[str], samples: Optional[int], seed: Optional[int], beta: Optional[int],
               guard: Optional[int], work_guard: Optional[int], workers: Optional[int],
               output: Optional[str], fmt: Optional[str]) -> None:
    """Indagine statistica su coppie (beta = 2) o schedule (beta >= 3) di basi."""
    if samples is not None and mode is None:
        mode = "sampled"
    cfg = build_config(
        config_path,
        p=p, n=n, n_max=n_max, mode=mode, samples=samples, seed=seed, beta=beta,
        guard=guard, work_guard=work_guard, workers=workers, output=output, format=fmt,
    )
    records = run_experiment(cfg)
    logger.info("survey completata: %d record", len(records))
