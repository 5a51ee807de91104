import deal
from typing import List

@deal.chain(
    deal.pre(lambda data: isinstance(data, list)),
    deal.post(lambda result: result >= 0),
    deal.ensure(lambda data, result: result <= sum(abs(x) for x in data))
)
def property_solution(data: List[int]) -> int:
    return sum(x for x in data if x >= 0)
