import asyncio
from datetime import datetime, timedelta
import logging
from typing import Callable, Iterable, Optional, TypeVar

import gtci
from gtci.async_utils import run_blocking

logger = logging.getLogger("gtci")

T = TypeVar("T")
R = TypeVar("R")


def time_format(time: timedelta):
    minutes = f"{time.seconds // 60}m " if time.seconds > 59 else ""
    return minutes + f"{time.seconds % 60}s {time.microseconds // 1000}ms"


# fan a batch out to worker tasks, each running the job off the event loop
async def process_batch(
    batch: Iterable[T],
    job: Callable[[T], R],
    on_output: Callable[[T, R], None],
    on_error: Callable[[T, Exception], None],
    max_workers: Optional[int] = None,
    label: str = "family",
):
    iterator = iter(batch)
    workers_count = max(1, max_workers or gtci.MAX_WORKERS)
    successful = 0  # jobs finished
    failed = 0  # jobs raised
    time_total = timedelta()  # summed over all workers

    def next_input():  # distribute batch to workers
        try:
            return True, next(iterator)
        except StopIteration:
            return False, None

    def log_progress(time_delta=timedelta(), start=False, end=False):
        nonlocal time_total

        time_total += time_delta
        done = successful + failed
        if start:
            logger.debug(f"Starting batch processing with {workers_count} workers")
        elif end:
            logger.debug(
                "Processed %d %ss - %s/%s - %s total - %d successful - %d failed\n"
                % (
                    done,
                    label,
                    time_format(time_total / max(done, 1) / workers_count),
                    label,
                    time_format(time_total / workers_count),
                    successful,
                    failed,
                )
            )
        else:
            logger.debug(
                "%s %d - %s - %s total - %d successful - %d failed"
                % (
                    label.capitalize(),
                    done,
                    time_format(time_delta),
                    time_format(time_total / workers_count),
                    successful,
                    failed,
                )
            )

    async def worker():  # run jobs sequentially
        nonlocal successful, failed

        time_start = datetime.now()
        has_next, item = next_input()
        while has_next:
            try:
                result = await run_blocking(job, item)
                on_output(item, result)
                successful += 1
            except Exception as e:
                logger.error(f"{label.capitalize()} {item}: {repr(e)}")
                on_error(item, e)
                failed += 1

            time_end = datetime.now()
            log_progress(time_end - time_start)
            time_start = time_end
            has_next, item = next_input()

    workers = [asyncio.create_task(worker()) for _ in range(workers_count)]
    log_progress(start=True)
    await asyncio.gather(*workers)
    log_progress(end=True)
    return successful, failed
