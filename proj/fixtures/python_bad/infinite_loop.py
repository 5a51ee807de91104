def runningSum(xs: list[int]) -> list[int]:
    while True:
        pass
