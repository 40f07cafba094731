"""Shared lattice corpus for the test suite."""

EVEN_GRAMS = [
    [[2]],
    [[-2]],
    [[4]],
    [[6]],
    [[2, 1], [1, 2]],
    [[0, 1], [1, 0]],
    [[2, 0], [0, 4]],
    [[2, 1], [1, 4]],
    [[0, 2], [2, 0]],
]

ODD_GRAMS = [
    [[1]],
    [[3]],
    [[5]],
    [[1, 0], [0, 2]],
    [[1, 0], [0, 1]],
]
