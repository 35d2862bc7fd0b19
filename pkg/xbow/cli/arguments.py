import argparse
from typing import List, Sequence, Tuple
from config.config import Config
from xbow.models.codebook import CodebookMethod, ScalingMode
from xbow.models.run_config import RunConfig
from xbow.models.settings import ActivityFilter, QuantizationConfig, SvqConfig, TextConfig, WindowingConfig
from xbow.utils.errors import UsageError
from xbow.utils.validators import (
    validate_codebook_size, validate_input_path, validate_output_path, validate_term_frequencies,
    validate_windowing
)

DESCRIPTION = "Crossmodal bag-of-words: turns numeric frame streams and text into term-frequency histograms."

EPILOG = """subcommands:
  eval GOLD PRED        Compare two label files (name;[time;]label): CCC and Pearson r
                        for numeric labels, weighted/unweighted accuracy otherwise

examples:
  xbow -i LLD_train.csv -o BoAW_train.arff -l labels_train.csv -t 8.0 0.8 -standardizeInput
       -size 1000 -c random++ -B codebook.txt -a 20 -log
  xbow -i LLD_valid.csv -o BoAW_valid.arff -l labels_valid.csv -t 8.0 0.04 -b codebook.txt -a 20
  xbow -i tweets.csv -attributes ncr0 -o BoW_train.arff -minTermFreq 500 -maxTermFreq 100000 -nGram 2 -B dict.txt
"""

# Every recognised flag with its argparse options, in help order
FLAGS: List[Tuple[str, dict]] = [
    ('-i', dict(dest='input_path', metavar='FILE', help='Input file: semicolon CSV or ARFF')),
    ('-o', dict(dest='output_path', metavar='FILE', help='Output file; .arff, .csv or .libsvm selects the format')),
    ('-l', dict(dest='labels_path', metavar='FILE', help='Labels file: name;time;label or name;label rows')),
    ('-attributes', dict(dest='attributes', metavar='SPEC',
                         help='Column roles: n name, t time, c label, r remove, 0 text, 1-9 feature class; '
                              'X[m] repeats X (default: n, t, then class 1)')),
    ('-t', dict(dest='window', nargs=2, type=float, metavar=('WIDTH', 'HOP'),
                help='Window width and hop in seconds; without it every instance gives one bag')),
    ('-standardizeInput', dict(dest='standardize', action='store_true',
                               help='Standardise features to zero mean, unit variance')),
    ('-normalizeInput', dict(dest='normalize_input', action='store_true',
                             help='Normalise features to the range [0, 1]')),
    ('-activity', dict(dest='activity', nargs=3, metavar=('CLASS', 'DIM', 'THRESHOLD'),
                       help='Keep only frames whose value in dimension DIM (0-based) of feature class CLASS '
                            'is at least THRESHOLD')),
    ('-size', dict(dest='size', type=int, metavar='N',
                   help=f'Codebook size per feature class (default {Config.DEFAULT_CODEBOOK_SIZE})')),
    ('-c', dict(dest='method', choices=[m.value for m in CodebookMethod], metavar='METHOD',
                help=f'Codebook generation: random, random++, kmeans, kmeans++ '
                     f'(default {Config.DEFAULT_CODEBOOK_METHOD})')),
    ('-supervised', dict(dest='supervised', action='store_true',
                         help='Learn -size words per class label and concatenate the codebooks')),
    ('-svq', dict(dest='svq', nargs=2, type=int, metavar=('BLOCKS', 'SIZE'),
                  help='Split vector quantisation: BLOCKS blocks with SIZE words each; -size sets the top codebook')),
    ('-seed', dict(dest='seed', type=int, metavar='N',
                   help=f'Random seed for codebook generation (default {Config.DEFAULT_SEED})')),
    ('-B', dict(dest='write_codebook', metavar='FILE', help='Save the trained codebook')),
    ('-b', dict(dest='read_codebook', metavar='FILE', help='Load a codebook and apply it (no training)')),
    ('-a', dict(dest='assignments', type=int, metavar='N',
                help=f'Assign every frame to its N nearest words (default {Config.DEFAULT_ASSIGNMENTS})')),
    ('-gaussian', dict(dest='gaussian', nargs='?', type=float, const=Config.DEFAULT_GAUSSIAN_SIGMA,
                       metavar='SIGMA', help='Weight assignments by exp(-d^2 / (2 SIGMA^2)) '
                                             f'(default SIGMA {Config.DEFAULT_GAUSSIAN_SIGMA})')),
    ('-log', dict(dest='log', action='store_true', help='Logarithmic term frequencies lg(TF + 1)')),
    ('-idf', dict(dest='idf', action='store_true', help='Inverse document frequency weighting')),
    ('-norm', dict(dest='norm', action='store_true', help='Divide every sub-bag by its total mass')),
    ('-nGram', dict(dest='n_gram', type=int, metavar='N',
                    help=f'Word n-grams up to N for text (default {Config.DEFAULT_NGRAM})')),
    ('-nCharGram', dict(dest='n_char_gram', type=int, metavar='N',
                        help='Also character N-grams of every word (N >= 2)')),
    ('-minTermFreq', dict(dest='min_term_freq', type=int, metavar='N',
                          help='Drop terms seen fewer than N times in training')),
    ('-maxTermFreq', dict(dest='max_term_freq', type=int, metavar='N',
                          help='Drop terms seen more than N times in training')),
    ('-h', dict(dest='help', action='store_true', help='Show this help text')),
]

# Flags that only make sense when a codebook is learned
LEARNING_FLAGS = ('-size', '-c', '-supervised', '-svq')


class XbowArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> XbowArgumentParser:
    parser = XbowArgumentParser(
        prog='xbow',
        description=DESCRIPTION,
        epilog=EPILOG,
        add_help=False,
        allow_abbrev=False,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    for flag, options in FLAGS:
        parser.add_argument(flag, **options)
    return parser


def help_text() -> str:
    return build_parser().format_help()


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Command line to RunConfig; flag order does not matter"""
    argv = list(argv)
    if not argv or '-h' in argv:
        return RunConfig(show_help=True)

    args = build_parser().parse_args(argv)
    _check_conflicts(args)

    valid, error = validate_input_path(args.input_path)
    if not valid:
        raise UsageError(f"-i: {error}")
    for flag, path in (('-l', args.labels_path), ('-b', args.read_codebook)):
        if path is not None:
            valid, error = validate_input_path(path)
            if not valid:
                raise UsageError(f"{flag}: {error}")
    if args.output_path is not None:
        valid, error = validate_output_path(args.output_path)
        if not valid:
            raise UsageError(f"-o: {error}")
    elif args.write_codebook is None:
        raise UsageError("-o <output file> is required unless only a codebook is written with -B")

    try:
        return RunConfig(
            input_path=args.input_path,
            output_path=args.output_path,
            labels_path=args.labels_path,
            attributes=args.attributes,
            windowing=_windowing(args),
            scaling=_scaling(args),
            activity=_activity(args),
            codebook_size=_codebook_size(args),
            method=CodebookMethod(args.method or Config.DEFAULT_CODEBOOK_METHOD),
            supervised=args.supervised,
            svq=SvqConfig(*args.svq) if args.svq else None,
            seed=_seed(args),
            write_codebook=args.write_codebook,
            read_codebook=args.read_codebook,
            quantization=QuantizationConfig(
                num_assignments=Config.DEFAULT_ASSIGNMENTS if args.assignments is None else args.assignments,
                gaussian=args.gaussian is not None,
                sigma=Config.DEFAULT_GAUSSIAN_SIGMA if args.gaussian is None else args.gaussian,
            ),
            text=_text_config(args),
            log=args.log,
            idf=args.idf,
            normalize=args.norm,
        )
    except ValueError as e:
        raise UsageError(str(e))


def _check_conflicts(args: argparse.Namespace):
    if args.input_path is None:
        raise UsageError("-i <input file> is required")
    if args.read_codebook is not None:
        given = {
            '-size': args.size is not None,
            '-c': args.method is not None,
            '-supervised': args.supervised,
            '-svq': args.svq is not None,
            '-B': args.write_codebook is not None,
        }
        clashing = [flag for flag, present in given.items() if present]
        if clashing:
            raise UsageError(f"-b applies a stored codebook and cannot be combined with {', '.join(clashing)}")
    if args.standardize and args.normalize_input:
        raise UsageError("-standardizeInput and -normalizeInput are mutually exclusive")
    if args.supervised and args.svq is not None:
        raise UsageError("-supervised and -svq are mutually exclusive")


def _windowing(args: argparse.Namespace):
    if args.window is None:
        return None
    width, hop = args.window
    valid, error = validate_windowing(width, hop)
    if not valid:
        raise UsageError(f"-t: {error}")
    return WindowingConfig(width, hop)


def _scaling(args: argparse.Namespace) -> ScalingMode:
    if args.standardize:
        return ScalingMode.STANDARDIZE
    if args.normalize_input:
        return ScalingMode.NORMALIZE
    return ScalingMode.NONE


def _activity(args: argparse.Namespace):
    if args.activity is None:
        return None
    k_text, dim_text, threshold_text = args.activity
    try:
        feature_class, dim, threshold = int(k_text), int(dim_text), float(threshold_text)
    except ValueError:
        raise UsageError("-activity expects CLASS DIM THRESHOLD, e.g. -activity 1 0 -50")
    if not 1 <= feature_class <= 9:
        raise UsageError("-activity: feature class must be between 1 and 9")
    if dim < 0:
        raise UsageError("-activity: dimension must not be negative")
    return ActivityFilter(feature_class, dim, threshold)


def _codebook_size(args: argparse.Namespace) -> int:
    size = Config.DEFAULT_CODEBOOK_SIZE if args.size is None else args.size
    valid, error = validate_codebook_size(size)
    if not valid:
        raise UsageError(f"-size: {error}")
    return size


def _seed(args: argparse.Namespace) -> int:
    seed = Config.DEFAULT_SEED if args.seed is None else args.seed
    if seed < 0:
        raise UsageError("-seed must be a non-negative integer")
    return seed


def _text_config(args: argparse.Namespace) -> TextConfig:
    defaults = TextConfig()
    min_freq = defaults.min_term_freq if args.min_term_freq is None else args.min_term_freq
    max_freq = defaults.max_term_freq if args.max_term_freq is None else args.max_term_freq
    valid, error = validate_term_frequencies(min_freq, max_freq)
    if not valid:
        raise UsageError(error)
    return TextConfig(
        n_gram=defaults.n_gram if args.n_gram is None else args.n_gram,
        n_char_gram=defaults.n_char_gram if args.n_char_gram is None else args.n_char_gram,
        min_term_freq=min_freq,
        max_term_freq=max_freq,
    )


def recognised_flags() -> List[str]:
    return [flag for flag, _ in FLAGS]
