# %% [markdown]
# Escalation with non-diagonal Gram matrices
#
# Start from <n>, add a vector of norm equal to the truant, screen the
# extensions and merge isometric ones.  At rank 4 the tight leaves are
# certified up to the verification bound.

# %%
import time

from tightforms.escalation import escalation_search, quaternary_census

# %%
t = time.perf_counter()
res = escalation_search(8, 4, 10**4)
print(f"{time.perf_counter() - t:.1f}s")
for rank, nodes in sorted(res.ranks.items()):
    print(rank, len(nodes))
for c in res.certificates:
    print(c.form.entries, "det", c.form.det)

# %%
# no quaternary tight lattice once n >= 10
for n in (10, 11):
    print(n, len(escalation_search(n, 4, 10**4).certificates))

# %%
# m1 is the largest truant among failing leaves, m2 the number of tight classes
m1, m2, _ = quaternary_census(7, 10**4)
print(m1, m2)

# %%
# n = 1 needs the integral overlattices of the leaves as well
res1 = escalation_search(1, 4, 10**4, overlattices=True)
print(len(res1.certificates), sum(c.form.is_diagonal() for c in res1.certificates))
