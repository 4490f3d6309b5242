#!/usr/bin/env python3
"""Writes the crafted benchmark corpus into corpus/ (deterministic)."""

import pathlib
import random
import sys

OUT = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def header(consts, funs=(), preds=()):
    lines = ["(set-logic UF)", "(declare-sort U 0)"]
    lines += [f"(declare-const {c} U)" for c in consts]
    lines += [f"(declare-fun {name} ({' '.join(['U'] * k)}) U)" for name, k in funs]
    lines += [f"(declare-fun {name} ({' '.join(['U'] * k)}) Bool)" for name, k in preds]
    return lines


def forall(vs, body):
    binders = " ".join(f"({v} U)" for v in vs)
    return f"(assert (forall ({binders}) {body}))"


def chain(rng, n, length):
    """Relation image under a converse map, closed by transitivity."""
    cs = [f"c{i}" for i in range(n)]
    path = rng.sample(cs, length + 1)
    lines = header(cs, preds=[("R", 2), ("T", 2), ("D", 1)])
    for u, v in zip(path, path[1:]):
        lines.append(f"(assert (R {u} {v}))")
    lines.append(f"(assert (not (T {path[-1]} {path[0]})))")
    lines.append(f"(assert (D {rng.choice(cs)}))")
    lines.append(forall("xy", "(=> (R x y) (T y x))"))
    lines.append(forall("xyz", "(=> (and (T x y) (T y z)) (T x z))"))
    lines.append(forall("xy", "(=> (and (D x) (R x y)) (D y))"))
    return lines


def injective(rng, n):
    """Two arguments collide under an injective function."""
    cs = [f"c{i}" for i in range(n)]
    i, j = rng.sample(range(2, n), 2)
    k = rng.choice([x for x in range(n) if x not in (i, j)])
    lines = header(cs, funs=[("g", 1)], preds=[("P", 2), ("M", 1)])
    lines.append(f"(assert (= (g c{i}) c{k}))")
    lines.append(f"(assert (= (g c{j}) c{k}))")
    lines.append(f"(assert (M c{i}))")
    lines.append(f"(assert (not (M c{j})))")
    for _ in range(2):
        a, b = rng.sample(cs, 2)
        lines.append(f"(assert (P {a} {b}))")
    lines.append(forall("xy", "(or (not (= (g x) (g y))) (= x y))"))
    lines.append(forall("xy", "(=> (P x y) (P y x))"))
    return lines


def join(rng, n):
    """A four-variable join rule followed by a symmetric closure."""
    cs = [f"c{i}" for i in range(n)]
    a, b, k, l = rng.sample(range(n), 4)
    lines = header(cs, preds=[("P", 2), ("Q", 2), ("Z", 1)])
    lines.append(f"(assert (P c{a} c{k}))")
    lines.append(f"(assert (P c{l} c{b}))")
    lines.append(f"(assert (not (Q c{b} c{a})))")
    lines.append(f"(assert (Z c{rng.randrange(n)}))")
    lines.append(forall("xyzw", "(=> (and (P x y) (P z w)) (Q x w))"))
    lines.append(forall("xy", "(=> (Q x y) (Q y x))"))
    return lines


def congruence(rng, n):
    """Equalities pushed through a binary function into a predicate."""
    cs = [f"c{i}" for i in range(n)]
    a, b, c, d = rng.sample(range(n), 4)
    lines = header(cs, funs=[("h", 2)], preds=[("E", 2), ("G", 1)])
    lines.append(f"(assert (E c{a} c{b}))")
    lines.append(f"(assert (E c{c} c{d}))")
    lines.append(f"(assert (G (h c{a} c{c})))")
    lines.append(f"(assert (not (G (h c{b} c{d}))))")
    lines.append(forall("xy", "(=> (E x y) (= x y))"))
    lines.append(forall("xy", "(=> (E x y) (E y x))"))
    lines.append(forall("xyz", "(=> (and (E x y) (E y z)) (E x z))"))
    lines.append(forall("xyzw", "(or (not (G (h x y))) (not (= x z)) (not (= y w)) (G (h z w)))"))
    return lines


def redundant(n, arity, pivot, with_unused):
    """All but the last candidates make the clause true in the model."""
    cs = [f"c{i}" for i in range(n)]
    preds = [("P", 1), ("Q", 1), ("W", 1), ("V", 1)][:arity]
    lines = header(cs, preds=preds)
    for i in range(n):
        if i < pivot:
            lines.append(f"(assert (P c{i}))")
        else:
            lines.append(f"(assert (not (P c{i})))")
        for name, _ in preds[1:]:
            lines.append(f"(assert (not ({name} c{i})))")
    vs = "xyzw"[:arity]
    body = "(or " + " ".join(f"({name} {v})" for (name, _), v in zip(preds, vs)) + ")"
    lines.append(forall(vs, body))
    if with_unused:
        lines.append(forall("xy", "(or (P x) (P c0))"))
    return lines


def saturating(n):
    cs = [f"c{i}" for i in range(n)]
    lines = header(cs, preds=[("P", 1), ("R", 2)])
    lines.append("(assert (P c0))")
    lines.append(forall("xy", "(=> (R x y) (P y))"))
    lines.append(forall("x", "(=> (P x) (P x))"))
    return lines


def write(name, lines):
    (OUT / name).write_text("\n".join(lines + ["(check-sat)", ""]))


def main():
    OUT.mkdir(exist_ok=True)
    rng = random.Random(20240611)
    problems = []
    for i in range(6):
        problems.append(chain(rng, 5 + i % 2, 3))
    for i in range(6):
        problems.append(injective(rng, 4 + i % 3))
    for i in range(6):
        problems.append(join(rng, 5 + i % 2))
    for i in range(4):
        problems.append(congruence(rng, 4 + i % 2))
    for k, lines in enumerate(problems, 1):
        write(f"herbrand_{k:02d}.smt2", lines)
    k = 0
    for arity in (2, 3, 4):
        for n in (5, 7, 9, 11):
            k += 1
            write(f"redundant_{k:02d}.smt2",
                  redundant(n, arity, n - 1, with_unused=(k % 2 == 0)))
    write("saturating_01.smt2", saturating(3))
    write("saturating_02.smt2", saturating(5))
    return 0


if __name__ == "__main__":
    sys.exit(main())
