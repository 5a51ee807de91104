import deal
from typing import List

@deal.chain(
    deal.pre(lambda data: all(isinstance(x, int) for x in data)),
    deal.pre(lambda data: data == sorted(data)),
    deal.post(lambda result: result == sorted(result)),
    deal.ensure(lambda data, result: all(x >= 0 for x in result))
)
def dafny_style_solution(data: List[int]) -> List[int]:
    """
    Requires: input sorted list of ints
    Ensures: output sorted and non-negative
    Invariant: sorted order maintained throughout transformation
    """
    assert all(isinstance(x, int) for x in data)
    assert data == sorted(data)
    result = [abs(x) for x in data]
    assert result == sorted(result)
    return result
