#pragma once

#include <stdexcept>
#include <string>

namespace mrpi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class NotSchurStable : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class NotNested : public Error {
public:
    using Error::Error;
};

class CapacityExceeded : public Error {
public:
    using Error::Error;
};

class EmptyDifference : public Error {
public:
    using Error::Error;
};

class InvalidContraction : public Error {
public:
    using Error::Error;
};

class InvalidTolerance : public Error {
public:
    using Error::Error;
};

class NotContractive : public Error {
public:
    using Error::Error;
};

class HorizonExceeded : public Error {
public:
    using Error::Error;
};

class DegenerateCurve : public Error {
public:
    using Error::Error;
};

class NotStabilizable : public Error {
public:
    using Error::Error;
};

class InfeasibleTightening : public Error {
public:
    using Error::Error;
};

}  // namespace mrpi
