#pragma once

#include <stdexcept>
#include <string>

namespace scatterwave {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the subclasses let tests pin the failure kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid grid / experiment / CLI parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

// An impedance sample left the admissible band (c, C) or was non-positive.
class MediumBoundsError : public Error {
public:
    using Error::Error;
};

// A Dirac atom does not sit on a node of the extended grid.
class AlignmentError : public Error {
public:
    using Error::Error;
};

// Array lengths that do not agree with the grid they claim to belong to.
class StructuralError : public Error {
public:
    using Error::Error;
};

// A reflection weight with |r| >= 1.
class WeightRangeError : public Error {
public:
    using Error::Error;
};

// Dense linear algebra requested above the configured size limit.
class SizeError : public Error {
public:
    using Error::Error;
};

// Multi-resolution analysis given too few or inconsistent levels.
class RefinementError : public Error {
public:
    using Error::Error;
};

// File input/output failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace scatterwave
