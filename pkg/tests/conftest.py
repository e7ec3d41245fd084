import pytest

from bdtrees.trees import parse_tree


def tree(text):
    return parse_tree(text).tree


@pytest.fixture(scope="session")
def small_trees():
    return {name: tree(s) for name, s in
            {"K1": "", "K2": "0", "P3": "0 1", "P4": "0 1 2", "K13": "0 0 0", "P5": "0 1 2 3",
             "spider": "0 0 1 2"}.items()}
