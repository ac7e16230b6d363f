#pragma once

#include <stdexcept>
#include <string>

namespace iqa {

// Error categories map 1:1 onto CLI exit codes (see tools/):
//   IoError -> 2, ShapeError -> 3, ParamError -> 4, anything else -> 5.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ParamError : public Error {
public:
    using Error::Error;
};

} // namespace iqa
