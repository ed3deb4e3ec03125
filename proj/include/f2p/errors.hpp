#pragma once

#include <stdexcept>
#include <string>

namespace f2p {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad shape, bad range, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Quadrature order outside the supported range.
class InvalidOrder : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Quadrature node outside (0, 1).
class InvalidNode : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// QR factorization met a numerically rank-deficient column.
class RankDeficient : public Error {
public:
    RankDeficient(const std::string& msg, int column) : Error(msg), column(column) {}
    int column;
};

class NotSymmetric : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Cholesky factorization of a Gram matrix failed (not numerically SPD).
class IllConditionedGram : public Error {
public:
    using Error::Error;
};

/// Gram regularization failed even after the re-orthonormalization retry.
class GramFailure : public Error {
public:
    using Error::Error;
};

/// BiCG inner product collapsed below the breakdown floor.
class Breakdown : public Error {
public:
    Breakdown(const std::string& msg, int iteration) : Error(msg), iteration(iteration) {}
    int iteration;
};

class EmptyInterval : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class CirclesDoNotCover : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A computed block contains NaN or infinity.
class NonFinite : public Error {
public:
    using Error::Error;
};

/// Matrix Market header names a format this reader does not accept.
class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line) : Error(msg), line(line) {}
    long line;
};

/// Two consecutive sweep windows produced the same leading eigenvalue.
class NonProgress : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace f2p
