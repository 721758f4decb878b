from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def par(funcs: Sequence[Callable[[], T]], workers: int = 1) -> list[T]:
    """
    Executes provided functions in parallel and waits for all of them to complete.

    Args:
        funcs: the functions to run
        workers: maximum number of threads, 1 runs everything on the calling thread

    Returns:
         a list of results, in the order of the given functions
    """
    if workers <= 1 or len(funcs) <= 1:
        return [f() for f in funcs]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda f: f(), funcs))
