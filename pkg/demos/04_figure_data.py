# %% [markdown]
# # Figure tables
#
# ``casimir figure N`` writes one CSV per panel. The same tables are available
# in-process; breakdown points appear as rows with ``valid=false``.

# %%
from nanocasimir.cli import figure_files

files = figure_files(1)
for name, text in files.items():
    lines = text.splitlines()
    print(name, f"{len(lines) - 1} rows")
    print("   ", lines[0])
    print("   ", lines[1])
    print("   ", lines[11])
