"""Reading and writing ``.sce`` instance files.

An ``.sce`` file is a YAML document holding one index or network instance,
optionally a code for it and message pmfs. Rationals are written as ``p/q``
strings and table rows as ``inputs -> outputs`` strings; see
``support/FileFormat.md`` for the full schema.
"""
import pathlib
import yaml

from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from code_equivalence.consts import DEFAULT_ENCODING, FileKind
from code_equivalence.exceptions import EquivalenceError, InstanceFileError
from code_equivalence.model.base import Eavesdropper
from code_equivalence.model.index import IndexCode, IndexInstance, Receiver
from code_equivalence.model.network import AugmentedInstance, Edge, Message, NetworkCode, \
    NetworkInstance
from code_equivalence.probinfo import Pmf
from code_equivalence.tables import Table
from code_equivalence.utils import parse_fraction

Instance = Union[IndexInstance, NetworkInstance]
Code = Union[IndexCode, NetworkCode]

ROW_SEPARATOR = '->'


def _rational_value(value: Fraction) -> Union[int, str]:
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return str(value)


class _Reader:
    """Typed access into the parsed document, reporting errors by dotted path."""

    def __init__(self, data: Any, path: str = ''):
        self.data = data
        self.path = path

    def error(self, message: str) -> InstanceFileError:
        return InstanceFileError(message, path=self.path or '<root>')

    def _child_path(self, key) -> str:
        if isinstance(key, int):
            return f'{self.path}[{key}]'
        return f'{self.path}.{key}' if self.path else str(key)

    def mapping(self) -> Mapping:
        if not isinstance(self.data, dict):
            raise self.error('Expected a mapping')
        return self.data

    def has(self, key: str) -> bool:
        return key in self.mapping() and self.data[key] is not None

    def get(self, key: str, required: bool = True) -> '_Reader':
        mapping = self.mapping()
        if key not in mapping or mapping[key] is None:
            if required:
                raise InstanceFileError(f'Missing required key "{key}"',
                                        path=self.path or '<root>')
            return _Reader(None, self._child_path(key))
        return _Reader(mapping[key], self._child_path(key))

    def items(self) -> List[Tuple[str, '_Reader']]:
        return [(str(k), _Reader(v, self._child_path(k))) for k, v in self.mapping().items()]

    def sequence(self) -> List['_Reader']:
        if self.data is None:
            return []
        if not isinstance(self.data, list):
            raise self.error('Expected a list')
        return [_Reader(item, self._child_path(i)) for i, item in enumerate(self.data)]

    def string(self) -> str:
        if isinstance(self.data, (dict, list)) or self.data is None:
            raise self.error('Expected a scalar id')
        return str(self.data)

    def strings(self) -> List[str]:
        return [item.string() for item in self.sequence()]

    def integer(self) -> int:
        if isinstance(self.data, bool) or not isinstance(self.data, int):
            raise self.error(f'Expected an integer, got {self.data!r}')
        return self.data

    def boolean(self) -> bool:
        if not isinstance(self.data, bool):
            raise self.error(f'Expected true or false, got {self.data!r}')
        return self.data

    def rational(self) -> Fraction:
        try:
            return parse_fraction(self.data)
        except EquivalenceError:
            raise self.error(f'Expected a rational number, got {self.data!r}')

    def pmf(self) -> Pmf:
        try:
            return Pmf(item.rational() for item in self.sequence())
        except InstanceFileError:
            raise
        except EquivalenceError as e:
            raise self.error(str(e))


def _parse_row(text: str, reader: _Reader) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    if not isinstance(text, str) or text.count(ROW_SEPARATOR) != 1:
        raise reader.error(f'Expected a row "inputs -> outputs", got {text!r}')
    left, right = text.split(ROW_SEPARATOR)
    try:
        return tuple(int(x) for x in left.split()), tuple(int(x) for x in right.split())
    except ValueError:
        raise reader.error(f'Row {text!r} holds a non-integer value')


def _parse_table(reader: _Reader, sizes: Sequence[int], name: str, single: bool) -> Table:
    entries = dict()
    for row in reader.sequence():
        inputs, outputs = _parse_row(row.data, row)
        if len(inputs) != len(sizes) or any(not 0 <= x < s for x, s in zip(inputs, sizes)):
            raise row.error(f'Inputs {inputs} outside the domain {tuple(sizes)} of "{name}"')
        if inputs in entries:
            raise row.error(f'Inputs {inputs} of "{name}" are defined twice')
        if single:
            if len(outputs) != 1:
                raise row.error(f'Encoder "{name}" must output exactly one value')
            entries[inputs] = outputs[0]
        else:
            entries[inputs] = outputs
    table = Table(sizes, entries, name=name)
    missing = table.missing()
    if missing:
        raise reader.error(f'Table "{name}" has no row for inputs {missing[0]} '
                           f'({len(missing)} rows missing)')
    return table


def _dump_table(table: Table) -> List[str]:
    rows = []
    for inputs, value in table.items():
        outputs = value if isinstance(value, tuple) else (value,)
        left = ' '.join(str(x) for x in inputs)
        right = ' '.join(str(x) for x in outputs)
        rows.append(f'{left} {ROW_SEPARATOR} {right}'.strip())
    return rows


def _dump_pmf(pmf: Pmf) -> List[Union[int, str]]:
    return [_rational_value(w) for w in pmf.weights]


def _eavesdroppers(reader: _Reader) -> List[Eavesdropper]:
    return [
        Eavesdropper(item.get('id').string(),
                     item.get('targets', required=False).strings(),
                     item.get('observes', required=False).strings())
        for item in reader.sequence()
    ]


def _dump_eavesdroppers(eavesdroppers: Sequence[Eavesdropper]) -> List[dict]:
    return [
        {'id': e.eavesdropper_id, 'targets': list(e.targets), 'observes': list(e.observes)}
        for e in eavesdroppers
    ]


def _parse_index_instance(reader: _Reader) -> IndexInstance:
    messages = [(item.get('id').string(), item.get('alphabet').integer())
                for item in reader.get('messages').sequence()]
    receivers = [
        Receiver(item.get('id').string(),
                 item.get('wants').strings(),
                 item.get('has', required=False).strings())
        for item in reader.get('receivers').sequence()
    ]
    return IndexInstance(messages, receivers,
                         _eavesdroppers(reader.get('eavesdroppers', required=False)))


def _dump_index_instance(instance: IndexInstance) -> dict:
    return {
        'messages': [{'id': m, 'alphabet': instance.alphabet(m)} for m in instance.message_ids],
        'receivers': [{'id': r.receiver_id, 'wants': list(r.wants), 'has': list(r.has)}
                      for r in instance.receivers],
        'eavesdroppers': _dump_eavesdroppers(instance.eavesdroppers),
    }


def _parse_network_instance(reader: _Reader) -> NetworkInstance:
    edges = []
    for item in reader.get('edges').sequence():
        edges.append(Edge(item.get('id').string(), item.get('tail').string(),
                          item.get('head').string(), item.get('capacity').rational()))
    messages = [
        Message(item.get('id').string(), item.get('alphabet').integer(),
                item.get('origin').string(),
                item.get('destinations', required=False).strings())
        for item in reader.get('messages', required=False).sequence()
    ]
    return NetworkInstance(reader.get('vertices').strings(), edges, messages,
                           _eavesdroppers(reader.get('eavesdroppers', required=False)))


def _dump_network_instance(instance: NetworkInstance) -> dict:
    return {
        'vertices': list(instance.vertices),
        'edges': [{'id': e.edge_id, 'tail': e.tail, 'head': e.head,
                   'capacity': _rational_value(e.capacity)} for e in instance.edges],
        'messages': [{'id': m.message_id, 'alphabet': m.alphabet_size, 'origin': m.origin,
                      'destinations': list(m.destinations)} for m in instance.messages],
        'eavesdroppers': _dump_eavesdroppers(instance.eavesdroppers),
    }


def _parse_augmented(reader: _Reader, base: NetworkInstance) -> AugmentedInstance:
    key_messages, key_pmfs = dict(), dict()
    for item in reader.get('keyMessages').sequence():
        vertex, message = item.get('vertex').string(), item.get('message').string()
        key_messages[vertex] = message
        key_pmfs[message] = item.get('pmf').pmf()
    return AugmentedInstance(base, key_messages, key_pmfs)


def _dump_augmented(instance: AugmentedInstance) -> dict:
    return {
        'keyMessages': [{'vertex': v, 'message': m, 'pmf': _dump_pmf(instance.key_pmfs[m])}
                        for v, m in instance.key_messages.items()],
    }


def _parse_index_code(reader: _Reader, instance: IndexInstance) -> IndexCode:
    bits = reader.get('codewordBits').integer()
    key_pmf = reader.get('key').pmf() if reader.has('key') else Pmf.point(1)
    linear = reader.get('linear').boolean() if reader.has('linear') else False
    encoder = _parse_table(
        reader.get('encoder'),
        [instance.alphabet(m) for m in instance.message_ids] + [key_pmf.support_size],
        name='e', single=True,
    )
    decoders = dict()
    decoder_reader = reader.get('decoders')
    for receiver in instance.receivers:
        rid = receiver.receiver_id
        if rid not in decoder_reader.mapping():
            raise decoder_reader.error(f'No decoder for receiver "{rid}"')
        decoders[rid] = _parse_table(
            decoder_reader.get(rid),
            [2 ** bits] + [instance.alphabet(h) for h in receiver.has],
            name=f'd[{rid}]', single=False,
        )
    return IndexCode(bits, encoder, decoders, key_pmf=key_pmf, linear=linear)


def _dump_index_code(code: IndexCode) -> dict:
    result = {'codewordBits': code.codeword_bits, 'linear': code.linear}  # type: Dict[str, Any]
    if not code.is_deterministic:
        result['key'] = _dump_pmf(code.key_pmf)
    result['encoder'] = _dump_table(code.encoder)
    result['decoders'] = {rid: _dump_table(table) for rid, table in code.decoders.items()}
    return result


def _parse_network_code(reader: _Reader, instance: NetworkInstance) -> NetworkCode:
    uses = reader.get('uses').integer()
    key_pmfs = {vertex: item.pmf()
                for vertex, item in reader.get('keys', required=False).items()} \
        if reader.has('keys') else {}
    for vertex in key_pmfs:
        if vertex not in instance.vertices:
            raise reader.get('keys').error(f'Key given for unknown vertex "{vertex}"')
    template = NetworkCode(uses, {}, {}, key_pmfs)
    encoder_reader = reader.get('encoders')
    encoders = dict()
    for edge in instance.edges:
        if edge.edge_id not in encoder_reader.mapping():
            raise encoder_reader.error(f'No encoder for edge "{edge.edge_id}"')
        encoders[edge.edge_id] = _parse_table(encoder_reader.get(edge.edge_id),
                                              template.encoder_domain(instance, edge),
                                              name=f'e[{edge.edge_id}]', single=True)
    decoders = dict()
    decoder_reader = reader.get('decoders', required=False)
    for vertex in instance.destinations:
        if decoder_reader.data is None or vertex not in decoder_reader.mapping():
            raise decoder_reader.error(f'No decoder at destination "{vertex}"')
        decoders[vertex] = _parse_table(decoder_reader.get(vertex),
                                        template.decoder_domain(instance, vertex),
                                        name=f'd[{vertex}]', single=False)
    return NetworkCode(uses, encoders, decoders, key_pmfs)


def _dump_network_code(code: NetworkCode, instance: NetworkInstance) -> dict:
    result = {'uses': code.uses}  # type: Dict[str, Any]
    if code.key_pmfs:
        result['keys'] = {v: _dump_pmf(code.key_pmfs[v]) for v in instance.vertices
                          if v in code.key_pmfs}
    result['encoders'] = {e: _dump_table(code.encoders[e]) for e in instance.edge_ids}
    result['decoders'] = {v: _dump_table(code.decoders[v]) for v in instance.destinations}
    return result


class InstanceFile:
    """Contents of one ``.sce`` file."""

    def __init__(self, instance: Instance, code: Optional[Code] = None,
                 pmfs: Optional[Mapping[str, Pmf]] = None,
                 codeword_bits: Optional[int] = None):
        self.instance = instance
        self.code = code
        self.pmfs = dict(pmfs) if pmfs else None  # type: Optional[Dict[str, Pmf]]
        self.codeword_bits = codeword_bits

    @property
    def kind(self) -> str:
        return FileKind.INDEX if isinstance(self.instance, IndexInstance) else FileKind.NETWORK

    @property
    def is_augmented(self) -> bool:
        return isinstance(self.instance, AugmentedInstance)

    def message_pmfs(self) -> Dict[str, Pmf]:
        """Pmfs of every message, uniform where the file gives none."""
        result = self.instance.uniform_pmfs()
        if self.is_augmented:
            result.update(self.instance.key_pmfs)
        result.update(self.pmfs or {})
        return result

    def require_code(self) -> Code:
        if self.code is None:
            raise InstanceFileError('File holds no code', path='code')
        return self.code

    @classmethod
    def loads(cls, text: str) -> 'InstanceFile':
        try:
            data = yaml.safe_load(text)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark
            raise InstanceFileError(f'Malformed file: {e.problem}',
                                    line=mark.line + 1 if mark else None,
                                    column=mark.column + 1 if mark else None)
        except yaml.YAMLError as e:
            raise InstanceFileError(f'Malformed file: {e}')
        root = _Reader(data)
        kind = root.get('kind').string()
        if kind not in FileKind.ALL:
            raise root.get('kind').error(f'Unknown kind "{kind}", expected one of '
                                         f'{", ".join(FileKind.ALL)}')
        instance_reader = root.get('instance')
        if kind == FileKind.INDEX:
            instance = _parse_index_instance(instance_reader)  # type: Instance
        else:
            instance = _parse_network_instance(instance_reader)
            if root.has('augmented'):
                instance = _parse_augmented(root.get('augmented'), instance)
        code = None  # type: Optional[Code]
        if root.has('code'):
            if kind == FileKind.INDEX:
                code = _parse_index_code(root.get('code'), instance)
            else:
                code = _parse_network_code(root.get('code'), instance)
        pmfs = None
        if root.has('pmfs'):
            pmfs = {mid: item.pmf() for mid, item in root.get('pmfs').items()}
        codeword_bits = root.get('codewordBits').integer() if root.has('codewordBits') else None
        return cls(instance, code, pmfs, codeword_bits)

    @classmethod
    def load(cls, path: Union[str, pathlib.Path]) -> 'InstanceFile':
        path = pathlib.Path(path)
        try:
            text = path.read_text(encoding=DEFAULT_ENCODING)
        except OSError as e:
            raise InstanceFileError(f'Cannot read {path}: {e.strerror}')
        return cls.loads(text)

    def as_dict(self) -> dict:
        data = {'kind': self.kind}  # type: Dict[str, Any]
        if self.codeword_bits is not None:
            data['codewordBits'] = self.codeword_bits
        if isinstance(self.instance, IndexInstance):
            data['instance'] = _dump_index_instance(self.instance)
        elif isinstance(self.instance, AugmentedInstance):
            data['instance'] = _dump_network_instance(self.instance.base)
            data['augmented'] = _dump_augmented(self.instance)
        else:
            data['instance'] = _dump_network_instance(self.instance)
        if isinstance(self.code, IndexCode):
            data['code'] = _dump_index_code(self.code)
        elif isinstance(self.code, NetworkCode):
            data['code'] = _dump_network_code(self.code, self.instance)
        if self.pmfs:
            data['pmfs'] = {mid: _dump_pmf(pmf) for mid, pmf in self.pmfs.items()}
        return data

    def dumps(self) -> str:
        return dump_yaml(self.as_dict())

    def store(self, path: Union[str, pathlib.Path]):
        pathlib.Path(path).write_text(self.dumps(), encoding=DEFAULT_ENCODING)

    def __eq__(self, other):
        return isinstance(other, InstanceFile) \
            and self.instance == other.instance \
            and self.code == other.code \
            and self.pmfs == other.pmfs \
            and self.codeword_bits == other.codeword_bits


def dump_yaml(data: Any) -> str:
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=False,
                          allow_unicode=True)
