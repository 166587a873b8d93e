"""
命令行模块

各子命令的处理函数
"""

from app.cli.commands import cmd_detect, cmd_evaluate, cmd_select, cmd_synth, cmd_vectorize, run_all, run_command

__all__ = [
    "cmd_vectorize",
    "cmd_select",
    "cmd_detect",
    "cmd_evaluate",
    "cmd_synth",
    "run_all",
    "run_command",
]
