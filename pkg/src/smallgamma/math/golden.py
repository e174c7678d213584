from collections import defaultdict
from typing import Dict, List, NamedTuple, Tuple

from path import Path


class GoldenValue(NamedTuple):
    inputs: Tuple[float, ...]
    value: complex


def parse_numbers(field: str) -> Tuple[float, ...]:
    """Parse a comma separated list of reals."""
    return tuple(float(v) for v in field.split(','))


def parse_value(field: str) -> complex:
    """Parse a value. Complex values are written as `re,im`."""
    parts = parse_numbers(field)
    if len(parts) == 1:
        return parts[0]
    re, im = parts
    return complex(re, im)


class GoldenValues(object):
    """Parse a golden-values file.

    Each line is `name<TAB>input(s)<TAB>value`, where both the inputs and the value can
    be comma separated. Empty lines and lines starting with `#` are skipped.
    """

    def __init__(self, filename='golden_values.tsv', file_path=None):
        """Load the given file.

        :param str/Path filename: the name of the file to be loaded
        :param str/Path file_path: an optional path to the file. If None, the package data dir will be used.
        """
        if not file_path:
            file_path = Path(__file__).parent / 'data'

        self.filename = Path(file_path) / filename
        self.values = self.load_file(self.filename)

    @staticmethod
    def load_file(filename) -> Dict[str, List[GoldenValue]]:
        """Load all records from the given file, grouped by name."""
        values = defaultdict(list)
        for line in Path(filename).read_text().splitlines():
            if not line.strip() or line.startswith('#'):
                continue
            name, inputs, value = line.split('\t')
            values[name].append(GoldenValue(parse_numbers(inputs), parse_value(value)))
        return dict(values)

    def __getitem__(self, name: str) -> List[GoldenValue]:
        return self.values[name]

    def names(self):
        return sorted(self.values)

    def lookup(self, name: str, *inputs: float) -> complex:
        """Get the value stored for the given function and inputs."""
        for record in self.values[name]:
            if record.inputs == tuple(float(i) for i in inputs):
                return record.value
        raise KeyError('no golden value for %s%r' % (name, inputs))
