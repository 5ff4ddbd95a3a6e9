#pragma once

#include <stdexcept>
#include <string>

namespace vosedge {

// Errors caused by bad inputs (files, parameters). The CLI maps these to
// exit code 1; logic_error-derived exceptions map to exit code 2.

class FileNotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CorruptDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfBoundsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidThresholdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyTruthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BothEmptyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vosedge
