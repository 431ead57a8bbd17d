import argparse
import json
import logging
import sys
import typing
from pathlib import Path

from pydantic import BaseModel, ValidationError

from src import __version__
from src.cli.commands import router
from src.cli.router import CommandRouter
from src.config import config, setup_logging
from src.errors import LabError

logger = logging.getLogger(__name__)

RESERVED = ("command", "config", "log_level")


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _is_list(annotation) -> bool:
    if typing.get_origin(annotation) is list:
        return True
    return any(_is_list(arg) for arg in typing.get_args(annotation))


def build_parser(commands: CommandRouter = router) -> argparse.ArgumentParser:
    """按参数模型的字段生成子命令与选项"""
    parser = argparse.ArgumentParser(prog="xhh-lab", description="Stochastic Hodgkin-Huxley laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in commands.commands.values():
        sub = subparsers.add_parser(command.name, help=command.help, description=command.help)
        sub.add_argument("--config", help="flat JSON document of parameters; flags override it")
        sub.add_argument("--log-level", default=config.log_level, help="root log level")
        for name, field in command.params.model_fields.items():
            options = {"dest": name, "default": argparse.SUPPRESS, "help": field.title}
            if _is_list(field.annotation):
                options["nargs"] = "+"
            sub.add_argument(_flag(name), **options)
    return parser


def load_parameters(params: type[BaseModel], namespace: argparse.Namespace) -> BaseModel:
    values = {}
    if namespace.config:
        values.update(json.loads(Path(namespace.config).read_text(encoding="utf-8")))
    values.update({k: v for k, v in vars(namespace).items() if k not in RESERVED})
    return params.model_validate(values)


def run(argv: list[str] | None = None, commands: CommandRouter = router) -> int:
    """解析参数并执行子命令，返回退出码"""
    parser = build_parser(commands)
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    setup_logging(namespace.log_level)
    command = commands.commands[namespace.command]
    try:
        params = load_parameters(command.params, namespace)
        logger.info("running %s", command.name)
        command.handler(params)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LabError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    logger.info("%s finished", command.name)
    return 0
