import sys
from typing import Dict, List, Optional, Sequence
from xbow.cli.arguments import XbowArgumentParser, help_text, parse_args
from xbow.formats.common import is_number
from xbow.formats.labels import read_labels
from xbow.models.dataset import format_instant
from xbow.services.pipeline_service import PipelineService
from xbow.utils.errors import MissingLabelError, XbowError
from xbow.utils.logger import get_logger
from xbow.utils.metrics import ccc, pearson, unweighted_accuracy, weighted_accuracy

logger = get_logger(__name__)

INTERNAL_ERROR = 3


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line; returns the process exit code"""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == 'eval':
            scores = evaluate_command(argv[1:])
            for name, value in scores.items():
                print(f"{name}: {value:.6f}")
            return 0

        cfg = parse_args(argv)
        if cfg.show_help:
            print(help_text())
            return 0

        PipelineService().run(cfg)
        return 0

    except XbowError as e:
        logger.error(f"Error running xbow: {str(e)}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Internal error: {str(e)}")
        return INTERNAL_ERROR


def evaluate_command(argv: Sequence[str]) -> Dict[str, float]:
    parser = XbowArgumentParser(prog='xbow eval', add_help=False, allow_abbrev=False)
    parser.add_argument('gold')
    parser.add_argument('pred')
    args = parser.parse_args(list(argv))
    return evaluate(args.gold, args.pred)


def evaluate(gold_path: str, pred_path: str) -> Dict[str, float]:
    """
    Score predictions against gold labels, joined on (name, time)

    Numeric labels give CCC and Pearson r, nominal labels weighted and
    unweighted accuracy.
    """
    try:
        gold = read_labels(gold_path)
        pred = read_labels(pred_path)
    except XbowError as e:
        raise e.in_stage('eval')

    gold_values: List[str] = []
    pred_values: List[str] = []
    for (name, key), label in gold.items():
        if (name, key) not in pred.entries:
            time = None if key is None else key / 1000
            raise MissingLabelError(f"No prediction for {format_instant(name, time)}", stage='eval')
        gold_values.append(label)
        pred_values.append(pred.entries[(name, key)])

    try:
        if gold_values and all(is_number(v) for v in gold_values + pred_values):
            gold_numbers = [float(v) for v in gold_values]
            pred_numbers = [float(v) for v in pred_values]
            return {
                'CCC': ccc(gold_numbers, pred_numbers),
                'Pearson': pearson(gold_numbers, pred_numbers),
            }
        return {
            'WA': weighted_accuracy(gold_values, pred_values),
            'UA': unweighted_accuracy(gold_values, pred_values),
        }
    except XbowError as e:
        raise e.in_stage('eval')
