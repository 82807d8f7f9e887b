import pytest

from code_equivalence.exceptions import EvaluationError
from code_equivalence.tables import Table


class TestTable:

    def test_tabulate_is_total(self):
        table = Table.tabulate([2, 3], lambda a, b: a + b, name='sum')
        assert table.is_total()
        assert table(1, 2) == 3
        assert list(table.items())[0] == ((0, 0), 0)

    def test_missing_entry(self):
        table = Table([2], {(0,): 1}, name='partial')
        assert table.missing() == [(1,)]
        assert not table.is_total()
        with pytest.raises(EvaluationError, match='partial'):
            table(1)

    def test_depends_on(self):
        table = Table.tabulate([2, 2], lambda a, b: a)
        assert table.depends_on(0)
        assert not table.depends_on(1)

    def test_lists_are_frozen(self):
        table = Table([1], {(0,): [1, 0]})
        assert table(0) == (1, 0)

    def test_equality_ignores_name(self):
        first = Table.constant([2], 0, name='a')
        assert first == first.renamed('b')
