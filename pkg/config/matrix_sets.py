# Хардкодированные наборы матриц из разобранных примеров (используются в тестах и fixtures/)

# Two 2x2 matrices with joint spectral radius exactly 1, for which the
# quadratic bound is sqrt(2) and the quartic SOS bound is 1.
ANDO_SHIH = [
    [[1.0, 0.0],
     [1.0, 0.0]],
    [[0.0, 1.0],
     [0.0, -1.0]],
]

# Three 4x4 integer matrices; rho(A1 A3)^(1/2) ~ 8.9149 is the best known lower bound.
THREE_MATRICES = [
    [[0.0, 1.0, 7.0, 4.0],
     [1.0, 6.0, -2.0, -3.0],
     [-1.0, -1.0, -2.0, -6.0],
     [3.0, 0.0, 9.0, 1.0]],
    [[-3.0, 3.0, 0.0, -2.0],
     [-2.0, 1.0, 4.0, 9.0],
     [4.0, -3.0, 1.0, 1.0],
     [1.0, -5.0, -1.0, -2.0]],
    [[1.0, 4.0, 5.0, 10.0],
     [0.0, 5.0, 1.0, -4.0],
     [0.0, -1.0, 4.0, 6.0],
     [-1.0, 5.0, 0.0, 1.0]],
]

# Published values for THREE_MATRICES, keyed by 2d
THREE_MATRICES_SOS = {2: 9.761, 4: 8.92, 6: 8.92}
THREE_MATRICES_CQ = {2: 9.761, 4: 9.01, 6: 8.92}
THREE_MATRICES_SR = {2: 12.519, 4: 9.887, 6: 9.3133}
THREE_MATRICES_LOWER = 8.9149

# 2x^4 + 2x^3y - x^2y^2 + 5y^4, SOS over the monomials x^2, y^2, xy
QUARTIC_SOS_EXAMPLE = {(4, 0): 2.0, (3, 1): 2.0, (2, 2): -1.0, (0, 4): 5.0}
QUARTIC_SOS_MONOMIALS = [(2, 0), (0, 2), (1, 1)]
