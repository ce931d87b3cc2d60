import pytest

from property_cases import check_product
from lifemoments.products import Product


@pytest.mark.parametrize("product", list(Product), ids=[p.value for p in Product])
def test_closed_form_matches_oracle(product):
    worst, failures = check_product(product, n_cases=200, seed=11)
    assert not failures, failures[:3]
