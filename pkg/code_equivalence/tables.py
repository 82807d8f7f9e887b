from typing import Any, Callable, Dict, Iterator, Mapping, Sequence, Tuple

from code_equivalence.exceptions import EvaluationError
from code_equivalence.utils import product_space, space_size


class Table:
    """Explicit function over the product domain ``[s_1] x ... x [s_k]``.

    Encoders map to an ``int``, decoders to a tuple of estimates. Tables
    built with :meth:`tabulate` are total; tables read from files may
    be partial and report it via :meth:`missing`.
    """

    def __init__(self, input_sizes: Sequence[int], entries: Mapping[Tuple[int, ...], Any],
                 name: str = ''):
        self.input_sizes = tuple(input_sizes)
        self.name = name
        self._entries = {tuple(k): self._freeze(v) for k, v in entries.items()}

    @staticmethod
    def _freeze(value):
        if isinstance(value, list):
            return tuple(value)
        return value

    @classmethod
    def tabulate(cls, input_sizes: Sequence[int], fn: Callable[..., Any],
                 name: str = '') -> 'Table':
        return cls(
            input_sizes=input_sizes,
            entries={inputs: fn(*inputs) for inputs in product_space(input_sizes)},
            name=name,
        )

    @classmethod
    def constant(cls, input_sizes: Sequence[int], value: Any, name: str = '') -> 'Table':
        return cls.tabulate(input_sizes, lambda *_: value, name=name)

    def __call__(self, *inputs: int):
        try:
            return self._entries[inputs]
        except KeyError:
            raise EvaluationError(f'Table "{self.name}" has no entry for input {inputs}')

    def items(self) -> Iterator[Tuple[Tuple[int, ...], Any]]:
        return ((k, self._entries[k]) for k in sorted(self._entries))

    def domain(self) -> Iterator[Tuple[int, ...]]:
        return product_space(self.input_sizes)

    def missing(self):
        return [inputs for inputs in self.domain() if inputs not in self._entries]

    def is_total(self) -> bool:
        return len(self._entries) >= space_size(self.input_sizes) and not self.missing()

    def depends_on(self, position: int) -> bool:
        """Whether changing the input at ``position`` alone can change the output."""
        groups = dict()  # type: Dict[Tuple[int, ...], Any]
        for inputs, value in self._entries.items():
            rest = inputs[:position] + inputs[position + 1:]
            if rest in groups and groups[rest] != value:
                return True
            groups.setdefault(rest, value)
        return False

    def renamed(self, name: str) -> 'Table':
        return Table(self.input_sizes, self._entries, name=name)

    def __eq__(self, other):
        return isinstance(other, Table) \
            and self.input_sizes == other.input_sizes \
            and self._entries == other._entries

    def __repr__(self):
        return f'Table({self.name!r}, sizes={self.input_sizes}, entries={len(self._entries)})'
