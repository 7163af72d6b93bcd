"""Order-free counting: unordered collections versus ordered lists."""

from __future__ import annotations

import pandas as pd

from src.quantum.twoparticle import OrderFreeCount, enumerate_order_free


def order_free_table(num_entities: int, states_per_entity: int) -> tuple[OrderFreeCount, pd.DataFrame]:
    """Count plus one row per occupation tuple (column n_i = entities in state i)."""
    result = enumerate_order_free(num_entities, states_per_entity)
    cols = [f"n_{i}" for i in range(states_per_entity)]
    df = pd.DataFrame([list(m) for m in result.multisets], columns=cols)
    return result, df
