import contextlib
import io
import logging
from typing import (
    Callable,
    Iterable,
    List,
    Optional,
    Tuple,
    Union,
)

import numpy

log = logging.getLogger("pyinteract")


class InteractError(Exception):
    '''exception raised in case of an error incurred in the
    pyinteract library.'''

    def __init__(self, value):
        self.value = value

    def __str__(self):
        return repr(self.value)


class DomainError(InteractError, ValueError):
    '''an argument lies outside the domain of an operation: a pole of
    a special function, an exponent outside its regime, a negative
    radius or an identity evaluated outside its range of validity.'''


class AccuracyError(InteractError, ArithmeticError):
    '''a tolerance could not be met within the allotted budget.

    The best available answer is kept in :attr:`estimate` together
    with its error bound :attr:`error`. Solvers additionally attach
    their best iterate as :attr:`result`.
    '''

    def __init__(self, value, estimate=None, error=None, result=None):
        InteractError.__init__(self, value)
        self.estimate = estimate
        self.error = error
        self.result = result


class NotAvailableError(InteractError, LookupError):
    '''a quantity has no closed form for the requested parameters
    (energy and potential constant of the logarithmic kernel).'''


class InitializationError(InteractError, RuntimeError):
    '''a solver was started from a configuration of infinite or
    undefined energy.'''


class UsageError(InteractError, ValueError):
    '''malformed command line or configuration file.'''


def tree_sum(values, axis: int = -1):
    '''sum *values* along *axis* by pairwise halving.

    The array is zero padded to the next power of two and halved
    until a single entry remains, so the order in which additions
    happen only depends on the length of the axis. Results are
    therefore reproducible bit for bit for a given input, unlike
    :func:`numpy.sum` whose blocking depends on memory layout.
    '''
    a = numpy.moveaxis(numpy.asarray(values, dtype=float), axis, -1)
    n = a.shape[-1]
    if n == 0:
        return numpy.zeros(a.shape[:-1])[()]
    width = 1
    while width < n:
        width *= 2
    if width != n:
        pad = numpy.zeros(a.shape[:-1] + (width - n,))
        a = numpy.concatenate([a, pad], axis=-1)
    while a.shape[-1] > 1:
        a = a[..., 0::2] + a[..., 1::2]
    return a[..., 0][()]


def chebyshev_points(lo: float, hi: float, n: int):
    '''return *n* Chebyshev points of the first kind on the open
    interval (lo, hi), in increasing order.'''
    j = numpy.arange(n, 0, -1)
    t = numpy.cos((2 * j - 1) * numpy.pi / (2 * n))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t


def parse_grid(spec: str) -> Tuple[float, float, int]:
    '''parse a grid specification ``lo:hi:m``.'''
    fields = spec.split(":")
    if len(fields) != 3:
        raise UsageError("grid must be given as lo:hi:m, got %r" % spec)
    try:
        lo, hi, m = float(fields[0]), float(fields[1]), int(fields[2])
    except ValueError:
        raise UsageError("grid must be given as lo:hi:m, got %r" % spec)
    return lo, hi, m


class InteractDispatcher(object):
    '''The dispatcher emulates the pyinteract command line.

    Captures stdout and stderr.

    Raises a :class:`pyinteract.InteractError` exception in case the
    command exits with an error code other than 0. A failed
    verification (exit code 1) therefore raises as well.

    Some command line options are associated with parsers. For
    example, ``solve --format csv`` prints a one row table. In order
    to associate parsers with options, an optional list of parsers
    can be supplied. The list will be processed in order checking
    for the presence of each option. A parser with an empty option
    list always applies.

    If no parser is given or no appropriate parser is found, the
    stdout output of the command will be returned.
    '''

    dispatch = None
    parsers = None

    def __init__(
        self,
        dispatch: str,
        parsers: Optional[Iterable[Tuple[Tuple[str, ...], Callable[[str], object]]]] = None,
    ):
        self.dispatch = dispatch
        self.parsers = parsers
        self.stderr = []

    def _run(self, argv: List[str]) -> Tuple[int, str, str]:
        # imported here, cli imports this module
        from pyinteract.cli import main

        stdout, stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            try:
                retval = main(argv)
            except SystemExit as e:
                retval = e.code if isinstance(e.code, int) else 2
        return retval, stderr.getvalue(), stdout.getvalue()

    def __call__(self, *args: str, **kwargs) -> Union[str, List[str], object]:
        '''
        execute a pyinteract command.

        Keyword arguments:
        raw -- ignore any parsers associated with this command.
        split_lines -- return stdout and stderr as a list of strings.
        '''
        args = [str(x) for x in args]
        retval, stderr, stdout = self._run([self.dispatch] + args)

        if kwargs.get("split_lines", False):
            stdout = stdout.splitlines()
            if stderr:
                stderr = stderr.splitlines()

        if retval:
            raise InteractError(
                "%s returned with error %i: "
                "stdout=%s, stderr=%s" %
                (self.dispatch,
                 retval,
                 stdout,
                 stderr))

        self.stderr = stderr

        # call parser for stdout:
        if not kwargs.get("raw") and stdout and self.parsers:
            for options, parser in self.parsers:
                for option in options:
                    if option not in args:
                        break
                else:
                    return parser(stdout)

        return stdout

    def get_messages(self):
        return self.stderr

    def usage(self):
        '''return the usage information for this command'''
        retval, stderr, stdout = self._run([self.dispatch, "--help"])
        return stdout or stderr


__all__ = [
    "InteractError",
    "DomainError",
    "AccuracyError",
    "NotAvailableError",
    "InitializationError",
    "UsageError",
    "InteractDispatcher",
    "tree_sum",
]
