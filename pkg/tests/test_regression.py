import pytest

from quadstrata.acceptance import REGRESSION_TABLE, RegressionRow
from quadstrata.oracle import NOT_REALIZABLE, REALIZABLE, decide


def row_id(row: RegressionRow) -> str:
    orders = ",".join(map(str, row.orders))
    roots = ",".join(row.roots) or "none"
    rho = "" if row.component is None else f"-rho{row.component}"
    return f"g{row.genus}[{orders}]-roots[{roots}]{rho}"


@pytest.mark.parametrize("row", REGRESSION_TABLE, ids=row_id)
def test_verdict_and_citation(row):
    v = decide(*row.request())
    assert (REALIZABLE if v.realizable else NOT_REALIZABLE) == row.expected
    assert v.citation == row.citation
    if v.status == NOT_REALIZABLE:
        assert v.obstruction is not None
