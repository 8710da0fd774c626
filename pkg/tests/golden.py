"""Known-good vectors for one worked 10-message instance over GF(11).

The demand asks for 2 combinations of the 5 messages at 1-based indices
{2,4,5,7,8}. The query key draws are pinned so the whole pipeline is
deterministic. Every matrix below was derived from the construction
formulas and cross-checked against the algebraic identities the tests
assert (dual annihilation, exact recovery, MDS structure), so these
values serve as a frozen oracle rather than a re-derivation.
"""
import numpy as np

P = 11
K = 10
D = 5
L = 2

SUPPORT = (1, 3, 4, 6, 7)  # 0-based
SUPPORT_1BASED = (2, 4, 5, 7, 8)

V = np.array([[1, 3, 2, 1, 6],
              [3, 10, 7, 4, 8]])

# GRS shape of the demand rows: V[i][j] = mult[j] * point[j]**i
DEMAND_MULTIPLIERS = (1, 3, 2, 1, 6)
DEMAND_POINTS = (3, 7, 9, 4, 5)
DUAL_MULTIPLIERS = (3, 10, 8, 8, 7)

# dual of V, (D-L) x D, rows annihilate V
LAMBDA = np.array([[3, 10, 8, 8, 7],
                   [9, 4, 6, 10, 2],
                   [5, 6, 10, 7, 10]])

# key draws replayed through a stub rng: K-D extension multipliers first,
# then K-D extension evaluation points
KEY_DRAWS = [3, 5, 1, 1, 4, 6, 1, 10, 2, 8]
EXT_MULTIPLIERS = (3, 5, 1, 1, 4)
EXT_POINTS = (6, 1, 10, 2, 8)

# draw column j lands at final position PERM[j] (0-based)
PERM = (1, 3, 4, 6, 7, 0, 2, 5, 8, 9)

# parity-check matrix of the query code, (D-L) x K
H = np.array([[3, 3, 5, 10, 8, 1, 8, 7, 1, 4],
              [7, 9, 5, 4, 6, 10, 10, 2, 2, 10],
              [9, 5, 5, 6, 10, 1, 7, 10, 4, 3]])

# query generator, (K-D+L) x K; row 1 holds the position-order multipliers
G = np.array([[9, 10, 2, 7, 3, 1, 5, 4, 9, 9],
              [10, 8, 2, 5, 5, 10, 9, 9, 7, 6],
              [5, 2, 2, 2, 1, 1, 3, 1, 3, 4],
              [8, 6, 2, 3, 9, 10, 1, 5, 6, 10],
              [4, 7, 2, 10, 4, 1, 4, 3, 1, 3],
              [2, 10, 2, 4, 3, 10, 5, 4, 2, 2],
              [1, 8, 2, 6, 5, 1, 9, 9, 4, 5]])

GEN_MULTIPLIERS_POSITION_ORDER = (9, 10, 2, 7, 3, 1, 5, 4, 9, 9)
GEN_MULTIPLIERS_DRAW_ORDER = (10, 7, 3, 5, 4, 9, 2, 1, 9, 9)

# recovery combiners: C[l] . G == U[l]
C1 = np.array([8, 1, 8, 9, 6, 1, 0])
C2 = np.array([0, 8, 1, 8, 9, 6, 1])

# demand embedded over all K columns, L x K
U = np.array([[0, 1, 0, 3, 2, 0, 1, 6, 0, 0],
              [0, 3, 0, 10, 7, 0, 4, 8, 0, 0]])

# answer to the basis dataset with a 1 in message 2 (1-based): column 2 of G
ANSWER_BASIS_2 = np.array([10, 8, 2, 6, 7, 10, 8])
