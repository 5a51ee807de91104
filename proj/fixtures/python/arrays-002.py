def countGreater(xs: list[int], t: int) -> int:
    return sum(1 for x in xs if x > t)
