"""Find the relabeling of AG(2,4) that best matches the printed block list."""

import itertools

printed = [
    (1, 2, 3, 4), (1, 5, 6, 7), (1, 8, 9, 10), (1, 11, 12, 13), (1, 14, 15, 16),
    (2, 5, 9, 13), (2, 8, 12, 16), (2, 7, 11, 15), (2, 6, 10, 14),
    (3, 6, 8, 13), (3, 9, 11, 16), (3, 7, 12, 14), (3, 5, 10, 15),
    (4, 7, 8, 15), (4, 6, 10, 11), (4, 9, 13, 14), (4, 5, 12, 16),
    (5, 8, 11, 14), (6, 9, 12, 15), (7, 10, 13, 16),
]
printed = [tuple(sorted(b)) for b in printed]
printed_set = set(printed)

# GF(4) = {0,1,2,3} with 2 = a, 3 = a+1, a^2 = a+1.
ADD = [[(x ^ y) for y in range(4)] for x in range(4)]
MUL = [[0] * 4 for _ in range(4)]
for x in range(4):
    for y in range(4):
        if x == 0 or y == 0:
            MUL[x][y] = 0
        else:
            # log table for GF(4)*: 1=a^0, 2=a^1, 3=a^2
            log = {1: 0, 2: 1, 3: 2}
            exp = [1, 2, 3]
            MUL[x][y] = exp[(log[x] + log[y]) % 3]

points = [(x, y) for x in range(4) for y in range(4)]
pidx = {p: i for i, p in enumerate(points)}
lines = set()
for m in range(4):          # slope m lines: y = m x + b
    for b in range(4):
        lines.add(frozenset(pidx[(x, ADD[MUL[m][x]][b])] for x in range(4)))
for c in range(4):          # vertical lines x = c
    lines.add(frozenset(pidx[(c, y)] for y in range(4)))
lines = sorted(tuple(sorted(l)) for l in lines)
assert len(lines) == 20

# through-point index
through = {i: [l for l in lines if i in l] for i in range(16)}

groups = [(2, 3, 4), (5, 6, 7), (8, 9, 10), (11, 12, 13), (14, 15, 16)]

best = (-1, None)
p0 = 0
ls0 = through[p0]  # 5 lines through p0
others0 = [tuple(v for v in l if v != p0) for l in ls0]
perms3 = list(itertools.permutations(range(3)))
for perm in itertools.permutations(range(5)):
    for orders in itertools.product(perms3, repeat=5):
        label = {p0: 1}
        for gi in range(5):
            trip = others0[perm[gi]]
            order = orders[gi]
            for t in range(3):
                label[trip[order[t]]] = groups[gi][t]
        relabeled = {tuple(sorted(label[v] for v in l)) for l in lines}
        agree = len(relabeled & printed_set)
        if agree > best[0]:
            best = (agree, sorted(relabeled))
            print("agreement", agree)

agree, blocks = best
print("best agreement:", agree, "of 20")
for b in blocks:
    mark = "" if b in printed_set else "   <-- differs"
    print(b, mark)
