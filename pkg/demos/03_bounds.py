# %% [markdown]
# Bounds on the minimal rank t(n)
#
# Upper bounds come from explicit lattices glued to diagonal prefixes,
# lower bounds from counting classes of L/2L.

# %%
from tightforms.constructions import (HALMOS, bounds_table, coset_count, coset_minima,
                                      table_rows, thm42_construct)
from tightforms.forms import minimum, represented_set

# %%
print(coset_minima(HALMOS))
print(coset_count(HALMOS, 2), ">= 5")

# %%
# every construction row is rechecked from scratch
rows = table_rows()
print(len(rows), "rows")
for n, L, s, label in rows[:6]:
    print(n, label, s)

# %%
L = thm42_construct(20)
print(L.dim, minimum(L), sorted(represented_set(L, 21, 39)) == list(range(21, 40)))

# %%
for r in bounds_table(30):
    print(r.n, r.lower, r.lower_by, r.upper, r.upper_by)
