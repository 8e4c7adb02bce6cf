"""Exact counts behind the grammar and polygon-dissection models."""
from quasipower.models import (DissectionSpec, dissection_counts, dissection_model, example_grammar,
                               grammar_counts, grammar_model)
from quasipower.quasi_power import rate_experiment

g = example_grammar()
print(g.serialize())
for n in (5, 11, 20):
    counts = grammar_counts(g, n)
    print(f"length {n}: {sum(counts.values())} words, {len(counts)} distinct (#a, #b) vectors")
print("words of length 11 with five a and five b:", grammar_counts(g, 11)[(5, 5)])

gm = grammar_model()
print("estimated grad u(0):", gm.u.gradient(), "\nestimated H_u(0):\n", gm.limit_covariance)
print(gm.metadata["estimation"])

# dissections: one class for triangles, one for every larger cell
spec = DissectionSpec.parse("3;4+")
for n in (5, 6, 7):
    print(f"{n}-gon:", dissection_counts(spec, n))
all_sizes = DissectionSpec.parse("all")
print("all dissections, n = 3..10:", [sum(dissection_counts(all_sizes, n).values()) for n in range(3, 11)])

dm = dissection_model(spec)
exp = rate_experiment(dm, [11, 16, 22])
print("dissection distances:", [round(r[2], 5) for r in exp.rows])
