#pragma once

#include <stdexcept>
#include <string>

namespace unsplit {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class IndexMismatchError : public Error {
public:
    explicit IndexMismatchError(const std::string& what) : Error(what) {}
};

class InvalidInstanceError : public Error {
public:
    explicit InvalidInstanceError(const std::string& what) : Error(what) {}
};

class InvalidFlowError : public Error {
public:
    explicit InvalidFlowError(const std::string& what) : Error(what) {}
};

class InvalidPathError : public Error {
public:
    explicit InvalidPathError(const std::string& what) : Error(what) {}
};

class BadLambdaError : public Error {
public:
    explicit BadLambdaError(const std::string& what) : Error(what) {}
};

class InvalidBodyError : public Error {
public:
    explicit InvalidBodyError(const std::string& what) : Error(what) {}
};

class InvalidBoundsError : public Error {
public:
    explicit InvalidBoundsError(const std::string& what) : Error(what) {}
};

class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& what) : Error(what) {}
};

class TooLargeError : public Error {
public:
    explicit TooLargeError(const std::string& what) : Error(what) {}
};

class CyclicSupportError : public Error {
public:
    explicit CyclicSupportError(const std::string& what) : Error(what) {}
};

class NotParallelError : public Error {
public:
    explicit NotParallelError(const std::string& what) : Error(what) {}
};

class NotCrossingError : public Error {
public:
    explicit NotCrossingError(const std::string& what) : Error(what) {}
};

class FaceViolationError : public Error {
public:
    explicit FaceViolationError(const std::string& what) : Error(what) {}
};

// Base for the brute-force rounders' "no in-body solution" outcomes; the
// derived classes carry the exhaustive-enumeration counterexample.
class NoSolutionInBodyError : public Error {
public:
    explicit NoSolutionInBodyError(const std::string& what) : Error(what) {}
};

class OneSidedViolatedError : public Error {
public:
    explicit OneSidedViolatedError(const std::string& what) : Error(what) {}
};

class ZeroDmaxError : public Error {
public:
    explicit ZeroDmaxError(const std::string& what) : Error(what) {}
};

class NegativeCostError : public Error {
public:
    explicit NegativeCostError(const std::string& what) : Error(what) {}
};

class UnsatisfiableParamsError : public Error {
public:
    explicit UnsatisfiableParamsError(const std::string& what) : Error(what) {}
};

// Raised on conditions that indicate a bug in this library rather than bad input.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace unsplit
