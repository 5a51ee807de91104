def maxNonAdjacent(xs: list[int]) -> int:
    take, skip = 0, 0
    for x in xs:
        take, skip = skip + x, max(take, skip)
    return max(take, skip)
