from ffchain import BasisSchedule, build_basis, partition, find_closed_loop, export_dot
from ffchain import build_union, format_poly, parse_poly

# ==========================
# Configurazione generale
# ==========================

P = 2
PAIR = ("x^3+x+1", "x^3+x^2+1")                          # coppia su F_8
SCHEDULE = ("x^4+x+1", "x^4+x^3+1", "x^4+x^3+x^2+x+1")    # schedule su F_16
LOOP_START = "x^2+x+1"
WRITE_DOT = False          # True -> scrive f8_union.dot e f16_loop.dot


def build_pair(p: int):
    """
    Crea la coppia di basi di F_8.
    """
    f1, f2 = (build_basis(text, p) for text in PAIR)
    return f1, f2


def build_loop_schedule(p: int) -> BasisSchedule:
    return BasisSchedule(tuple(build_basis(text, p) for text in SCHEDULE))


def main():
    f1, f2 = build_pair(P)
    part = partition(f1, f2)
    for cycle in part.cycles:
        print(f"ciclo di lunghezza {len(cycle)}:", " -> ".join(format_poly(a) for a in cycle.elements))

    schedule = build_loop_schedule(P)
    loop = find_closed_loop(parse_poly(LOOP_START, P), schedule)
    print(f"loop chiuso da {LOOP_START}: k = {loop.k}, elementi distinti = {len(loop.multiplicities)}")

    if WRITE_DOT:
        with open("f8_union.dot", "w", encoding="utf-8") as f:
            f.write(export_dot(build_union(f1, f2), name="f8_union"))
        with open("f16_loop.dot", "w", encoding="utf-8") as f:
            f.write(export_dot(loop, name="f16_loop"))
        print("File DOT scritti.")


if __name__ == "__main__":
    main()
