import os

import numpy as np

import pysubterm
from pysubterm.lookup import PROOF_MODES, YES

solver = pysubterm.InternalSolver()
paths = pysubterm.utils.trs_files(pysubterm.utils.corpus_dir())
names = [os.path.splitext(os.path.basename(p))[0] for p in paths]

proved = np.zeros((len(paths), len(PROOF_MODES)), dtype=bool)
for i, path in enumerate(paths):
    trs = pysubterm.read_trs(path)
    for j, mode in enumerate(PROOF_MODES):
        verdict, tree = pysubterm.prove_termination(trs, mode, solver)
        proved[i, j] = verdict == YES

width = max(len(n) for n in names)
print(' ' * width, *('{0:>9}'.format(m) for m in PROOF_MODES))
for name, row in zip(names, proved):
    print(name.ljust(width), *('{0:>9}'.format('x' if p else '.') for p in row))
print('proved:'.ljust(width), *('{0:>9}'.format(n) for n in proved.sum(axis=0)))

trs = pysubterm.read_trs(os.path.join(pysubterm.utils.corpus_dir(), 'dup.trs'))
print(pysubterm.prove_termination(trs, 'multi', solver)[1].to_text())
