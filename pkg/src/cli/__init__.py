from src.cli.app import build_parser, run
from src.cli.export import read_csv, write_csv
