# %% [markdown]
# Diagonal tight forms
#
# A form is tight T(n)-universal when it represents exactly the integers
# from n upward.  For diagonal forms this can be decided up to a cutoff
# with one sumset per coefficient.

# %%
from tightforms.diagonal import enumerate_new_tight, make_Xn, make_Yn, psi
from tightforms.forms import DiagonalForm, represented_set, truant

# %%
# <3,4,5,6> misses 35 and nothing smaller from 3 on
f = DiagonalForm.of(3, 4, 5, 6)
print(truant(f, 3, 2205))
print(psi((3, 3, 4, 5), 2205))

# %%
# the two families every large case reduces to
for n in (4, 5, 6):
    print(n, make_Xn(n), make_Yn(n))

# %%
# full classification for n = 3 up to the standard cutoff
res = enumerate_new_tight(3, 2205, 7)
for rank, c in res.counts().items():
    print(rank, c)
print(len(res.certificates), "new tight forms")
print(res.tuples()[:10])

# %%
# from n = 4 on only X_n and Y_n survive
for n in range(4, 9):
    print(n, enumerate_new_tight(n, 10**4, n + 2).tuples())
