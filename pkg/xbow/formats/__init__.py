from .attributes import parse_attribute_spec, default_attribute_spec
from .csv_format import read_csv
from .arff_format import read_arff
from .labels import read_labels
from .output import OutputFormat, write_bags
from .codebook_file import save_codebook, load_codebook

__all__ = [
    'parse_attribute_spec', 'default_attribute_spec',
    'read_csv', 'read_arff', 'read_labels',
    'OutputFormat', 'write_bags',
    'save_codebook', 'load_codebook'
]
