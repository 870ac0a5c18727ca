#pragma once

#include <stdexcept>
#include <string>

namespace tsbag {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "bad configuration" can catch DataError and
// ConfigError; the leaf types name the specific contract that was violated.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

#define TSBAG_DEFINE_ERROR(Name, Base)          \
    class Name : public Base {                  \
    public:                                     \
        using Base::Base;                       \
    };

TSBAG_DEFINE_ERROR(OutOfRange, Error)
TSBAG_DEFINE_ERROR(InvalidMark, Error)
TSBAG_DEFINE_ERROR(ShapeMismatch, Error)
TSBAG_DEFINE_ERROR(MaxRejections, ConfigError)
TSBAG_DEFINE_ERROR(NumericalOverflow, DataError)
TSBAG_DEFINE_ERROR(LagExceeded, Error)
TSBAG_DEFINE_ERROR(IndexOutOfRange, DataError)
TSBAG_DEFINE_ERROR(TooFewSamples, DataError)
TSBAG_DEFINE_ERROR(NotADag, Error)
TSBAG_DEFINE_ERROR(DegenerateWindow, DataError)
TSBAG_DEFINE_ERROR(EmptyEnsemble, Error)
TSBAG_DEFINE_ERROR(InsufficientPoints, Error)
TSBAG_DEFINE_ERROR(ParseError, DataError)

#undef TSBAG_DEFINE_ERROR

}  // namespace tsbag
