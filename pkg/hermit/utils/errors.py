"""
Copyright (C) 2026 hermit contributors.

Exception types raised by hermit.

Validation problems (bad input, bad configuration) derive from ValueError and
map to CLI exit code 2. Numerical failures derive from RuntimeError and map
to CLI exit code 1.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

from typing import Optional


class HermitError(Exception):
    """
    Base class for every error raised by hermit.
    """


class ValidationError(HermitError, ValueError):
    """
    Input or configuration does not satisfy a documented invariant.
    """


class DataFormatError(ValidationError):
    """
    A data file could not be parsed.
    """

    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        self.path = path
        self.line = line

        location = path
        if line is not None:
            location = f"{path}:{line}" if path else f"line {line}"
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class SolverError(HermitError, RuntimeError):
    """
    A numerical routine failed.
    """


class GlrResidualError(SolverError):
    """
    The imaginary part of x^H L x exceeded tolerance, so L is not Hermitian.
    """


class NotPositiveDefiniteError(SolverError):
    """
    An operator expected to be Hermitian positive-definite is not.
    """


class DegradedEstimateError(SolverError):
    """
    One or more CLIME columns did not reach an optimal LP solution.
    """
