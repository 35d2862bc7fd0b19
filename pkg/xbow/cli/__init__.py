from .arguments import parse_args, help_text, build_parser, FLAGS
from .main import main, evaluate

__all__ = ['parse_args', 'help_text', 'build_parser', 'FLAGS', 'main', 'evaluate']
