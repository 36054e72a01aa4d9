"""Decorators that attach exit-code error handling to command functions."""

import inspect
import sys
from collections.abc import Callable
from typing import Any, Optional, TypeVar

F = TypeVar("F", bound=Callable[..., Any])
ERROR_HANDLER_ATTR = "__hj_partition_error_handlers__"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_HYPOTHESIS = 2
EXIT_BUDGET = 3
EXIT_IO = 4


def error_handler(
    exception_type: type[BaseException],
    exit_code: int = EXIT_INTERNAL,
    handler: Optional[Callable[[Exception], tuple[str, Any]] | Callable[[Exception, Any], tuple[str, Any]]] = None,
) -> Callable[[F], F]:
    """
    Decorator to map an exception raised by a command to a process exit code.

    Args:
        exception_type: The type of exception to handle
        exit_code: The exit code returned when it is raised
        handler: Optional function returning (message, details). Can accept
                either (exception) or (exception, args) as parameters.

    Example:
        @error_handler(BudgetExceeded, exit_code=EXIT_BUDGET)
        @error_handler(HypothesisViolation, exit_code=EXIT_HYPOTHESIS, handler=write_witness)
        def cmd_partition(args) -> int:
            ...
    """

    def decorator(func: F) -> F:
        if not hasattr(func, ERROR_HANDLER_ATTR):
            setattr(func, ERROR_HANDLER_ATTR, [])

        handlers = getattr(func, ERROR_HANDLER_ATTR)
        # checked in application order: the decorator nearest the function first
        handlers.append(
            {
                "exception_type": exception_type,
                "exit_code": exit_code,
                "handler": handler,
            },
        )
        return func  # type: ignore

    return decorator


def get_error_handlers(command: Callable) -> Optional[list[dict[str, Any]]]:
    """
    Get error handlers from a command.

    Returns:
        List of error handler configurations if present, None otherwise
    """
    return getattr(command, ERROR_HANDLER_ATTR, None)


def invoke_error_handler(handler_func: Callable, exception: Exception, args: Any = None) -> tuple[str, Any]:
    """
    Invoke an error handler with the parameters its signature accepts.

    Returns:
        Tuple of (error_message, error_details)
    """
    param_count = len(inspect.signature(handler_func).parameters)
    if param_count == 2:
        return handler_func(exception, args)
    return handler_func(exception)


def run_command(command: Callable[[Any], int], args: Any) -> int:
    """Run a command, turning handled exceptions into ✗ lines and exit codes."""
    try:
        return command(args)
    except Exception as exc:
        for entry in get_error_handlers(command) or []:
            if isinstance(exc, entry["exception_type"]):
                message, details = str(exc), None
                if entry["handler"] is not None:
                    message, details = invoke_error_handler(entry["handler"], exc, args)
                print(f"✗ {message}", file=sys.stderr)
                if details:
                    print(f"  {details}", file=sys.stderr)
                return entry["exit_code"]
        raise
