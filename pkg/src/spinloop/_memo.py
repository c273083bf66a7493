from __future__ import annotations

import functools
import threading


def cached_method(func):
    """Per-instance memo for methods of immutable objects.

    The first fill of each key happens under an instance lock (re-entrant, so
    memoized recursions are fine); later reads skip the lock.
    """
    name = func.__name__

    @functools.wraps(func)
    def wrapper(self, *args):
        try:
            store = self.__dict__["_memo_store"]
        except KeyError:
            store = self.__dict__.setdefault("_memo_store", {})
        key = (name, args)
        try:
            return store[key]
        except KeyError:
            pass
        lock = self.__dict__.get("_memo_lock")
        if lock is None:
            lock = self.__dict__.setdefault("_memo_lock", threading.RLock())
        with lock:
            if key not in store:
                store[key] = func(self, *args)
            return store[key]

    return wrapper
