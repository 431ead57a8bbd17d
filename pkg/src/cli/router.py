from typing import Callable, NamedTuple

from pydantic import BaseModel


class Command(NamedTuple):
    name: str
    params: type[BaseModel]
    handler: Callable[[BaseModel], None]
    help: str


class CommandRouter:
    """子命令注册表，可以像 APIRouter 一样层层 include"""

    def __init__(self, tags: list[str] | None = None):
        self.tags = tags or []
        self.commands: dict[str, Command] = {}

    def command(self, name: str, params: type[BaseModel]):
        def register(handler: Callable[[BaseModel], None]):
            if name in self.commands:
                raise ValueError(f"command {name!r} is registered twice")
            help_text = (handler.__doc__ or name).strip().splitlines()[0]
            self.commands[name] = Command(name, params, handler, help_text)
            return handler

        return register

    def include_router(self, router: "CommandRouter") -> None:
        for name, command in router.commands.items():
            if name in self.commands:
                raise ValueError(f"command {name!r} is registered twice")
            self.commands[name] = command
