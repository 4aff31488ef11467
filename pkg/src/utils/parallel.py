"""
Coprimator - Parallel Helpers
Split index ranges into chunks and run them inline or on a process pool
"""

import logging
from multiprocessing import Pool
from typing import Any, Callable, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from src.core.config import config

logger = logging.getLogger(__name__)

# Shared read-only context of a pool worker (set once by the initializer)
_context: Any = None


def _init_worker(context: Any):
    global _context
    _context = context


def _run_chunk(task):
    func, chunk = task
    return func(_context, chunk)


def chunk_indices(indices: np.ndarray, chunk_size: Optional[int] = None) -> List[np.ndarray]:
    size = chunk_size or config.parallel.chunk_size
    indices = np.asarray(indices)
    return [indices[i:i + size] for i in range(0, len(indices), size)]


def map_chunks(
    func: Callable[[Any, np.ndarray], Any],
    context: Any,
    chunks: Sequence[np.ndarray],
    threads: Optional[int] = None,
    desc: Optional[str] = None
) -> List[Any]:
    """
    Apply func(context, chunk) to every chunk, results in chunk order

    func must be a module level function so it can be sent to workers.
    With more than one thread the context is shipped once per worker.
    """
    threads = threads or config.parallel.threads
    show = config.output.progress and desc is not None
    if threads <= 1 or len(chunks) <= 1:
        results = (func(context, chunk) for chunk in chunks)
        return list(tqdm(results, total=len(chunks), desc=desc, leave=False,
                         disable=None if show else True))

    logger.debug("running %d chunks on %d workers", len(chunks), threads)
    with Pool(processes=threads, initializer=_init_worker, initargs=(context,)) as pool:
        results = pool.imap(_run_chunk, [(func, chunk) for chunk in chunks])
        return list(tqdm(results, total=len(chunks), desc=desc, leave=False,
                         disable=None if show else True))
