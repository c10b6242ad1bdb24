#!/usr/bin/env python3
"""Regenerates the benchmark-shaped fixture networks in this directory.

The classic child/alarm/hepar2 benchmark files circulate in several variants
with diverging arc and parameter counts, so the suites here pin exact shapes
instead: node count, arc count, total CPT entry count and a moral-treewidth
cap per network. This script deterministically synthesizes stand-ins with
exactly those shapes and all-positive tables.

Usage: python3 gen_fixtures.py [--out DIR]
"""

import argparse
import os
import random

#       name     nodes arcs entries width cards  prefix
TARGETS = [
    ("child",    20,   30,   344,   3,   (2, 4), "C"),
    ("alarm",    37,   65,   752,   4,   (2, 4), "A"),
    ("hepar2",   70,  158,  2139,   6,   (2, 4), "H"),
]


def build_structure(n, arcs, k, rng):
    """Connected DAG with exactly `arcs` edges whose moral graph has
    treewidth <= k: every family {v} + parents(v) is kept inside a clique of
    an incrementally grown k-tree."""
    # Nodes 1..k take all earlier nodes as parents, seeding a (k+1)-clique.
    parents = [[] for _ in range(n)]
    cliques = [list(range(min(k + 1, n)))]
    used = 0
    for i in range(1, min(k + 1, n)):
        parents[i] = list(range(i))
        used += i
    rest = list(range(k + 1, n))
    if used + len(rest) > arcs or used + len(rest) * k < arcs:
        raise ValueError("arc target infeasible for this node count and width")
    deg = {i: 1 for i in rest}
    extras = arcs - used - len(rest)
    while extras > 0:
        i = rng.choice(rest)
        if deg[i] < k:
            deg[i] += 1
            extras -= 1
    for i in rest:
        pool = [c for c in cliques if len(c) >= deg[i]]
        clique = rng.choice(pool)
        parents[i] = sorted(rng.sample(clique, deg[i]))
        cliques.append(parents[i] + [i])
    assert sum(len(p) for p in parents) == arcs
    return parents


def total_entries(cards, parents):
    total = 0
    for v, ps in enumerate(parents):
        e = cards[v]
        for p in ps:
            e *= cards[p]
        total += e
    return total


def fit_cards(parents, target, lo, hi, rng, iters=20000):
    """Hill-climb per-node cardinalities until the entry total is exact."""
    n = len(parents)
    cards = [lo] * n
    cur = total_entries(cards, parents)
    for _ in range(iters):
        if cur == target:
            return cards
        v = rng.randrange(n)
        delta = rng.choice([-1, 1])
        c = cards[v] + delta
        if c < lo or c > hi:
            continue
        trial = cards.copy()
        trial[v] = c
        t = total_entries(trial, parents)
        # Accept improving moves always, sideways/uphill occasionally.
        if abs(target - t) < abs(target - cur) or rng.random() < 0.02:
            cards, cur = trial, t
    return None


def moral_treewidth_bound(parents, n):
    """Greedy min-fill width of the moral graph (an upper bound on treewidth)."""
    adj = [set() for _ in range(n)]
    for v, ps in enumerate(parents):
        fam = ps + [v]
        for a in fam:
            for b in fam:
                if a != b:
                    adj[a].add(b)
    alive = set(range(n))
    width = 0
    while alive:
        best, best_fill = None, None
        for v in alive:
            nb = adj[v] & alive
            fill = sum(1 for a in nb for b in nb if a < b and b not in adj[a])
            if best_fill is None or (fill, len(nb), v) < best_fill:
                best, best_fill = v, (fill, len(nb), v)
        nb = adj[best] & alive
        width = max(width, len(nb))
        for a in nb:
            for b in nb:
                if a != b:
                    adj[a].add(b)
        alive.remove(best)
    return width


def gen_network(name, n, arcs, entries, k, card_range, prefix):
    for attempt in range(200):
        rng = random.Random(f"{name}:{attempt}")
        parents = build_structure(n, arcs, k, rng)
        cards = fit_cards(parents, entries, card_range[0], card_range[1], rng)
        if cards is None:
            continue
        width = moral_treewidth_bound(parents, n)
        if width > k:
            continue
        return parents, cards, width, rng
    raise RuntimeError(f"could not fit {name} after 200 attempts")


def fmt(v):
    return format(v, ".17g")


def column(card, rng):
    vals = [rng.uniform(0.05, 1.0) for _ in range(card)]
    s = sum(vals)
    col = [v / s for v in vals]
    col[-1] = 1.0 - sum(col[:-1])  # exact unit sum in binary64
    return col


def write_bif(path, name, parents, cards, prefix, rng):
    n = len(parents)
    names = [f"{prefix}{i}" for i in range(n)]
    states = [[f"s{j}" for j in range(cards[i])] for i in range(n)]
    out = [f"network {name} {{", "}"]
    for i in range(n):
        out.append(f"variable {names[i]} {{")
        out.append(f"  type discrete [ {cards[i]} ] {{ {', '.join(states[i])} }};")
        out.append("}")
    for i in range(n):
        ps = parents[i]
        if not ps:
            out.append(f"probability ( {names[i]} ) {{")
            out.append("  table " + ", ".join(fmt(x) for x in column(cards[i], rng)) + ";")
            out.append("}")
            continue
        out.append(f"probability ( {names[i]} | {', '.join(names[p] for p in ps)} ) {{")
        # Row-major over parent configurations, last parent fastest.
        idx = [0] * len(ps)
        while True:
            tup = ", ".join(states[ps[d]][idx[d]] for d in range(len(ps)))
            out.append(f"  ({tup}) " + ", ".join(fmt(x) for x in column(cards[i], rng)) + ";")
            d = len(ps) - 1
            while d >= 0:
                idx[d] += 1
                if idx[d] < cards[ps[d]]:
                    break
                idx[d] = 0
                d -= 1
            if d < 0:
                break
        out.append("}")
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.dirname(os.path.abspath(__file__)))
    args = ap.parse_args()
    for name, n, arcs, entries, k, card_range, prefix in TARGETS:
        parents, cards, width, rng = gen_network(name, n, arcs, entries, k, card_range, prefix)
        path = os.path.join(args.out, f"{name}.bif")
        write_bif(path, name, parents, cards, prefix, rng)
        got = total_entries(cards, parents)
        assert got == entries, (name, got, entries)
        print(f"{name}: {n} nodes, {arcs} arcs, {got} entries, "
              f"min-fill width {width} (cap {k}) -> {path}")


if __name__ == "__main__":
    main()
