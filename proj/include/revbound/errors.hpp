#pragma once

#include <stdexcept>
#include <string>

namespace revbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The configured working precision cannot certify the requested accuracy.
class PrecisionInsufficient : public Error {
public:
    using Error::Error;
};

/// Too many verification cells straddle a non-smooth surface.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

/// The truncated integration box omits more mass than allowed.
class TruncationInsufficient : public Error {
public:
    using Error::Error;
};

/// Instance exceeds the hard size limits of the dense LP oracle.
class SizeLimit : public Error {
public:
    using Error::Error;
};

}  // namespace revbound
