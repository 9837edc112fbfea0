#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collinlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Design matrix is numerically rank deficient (perfect multicollinearity).
class RankDeficientError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class NotSquareError : public Error {
public:
    using Error::Error;
};

class NotSymmetricError : public Error {
public:
    using Error::Error;
};

class ZeroColumnError : public Error {
public:
    using Error::Error;
};

class ZeroNormError : public Error {
public:
    using Error::Error;
};

/// Auxiliary regression fits exactly; the VIF would be infinite.
class PerfectFitError : public Error {
public:
    using Error::Error;
};

class ConstantColumnError : public Error {
public:
    using Error::Error;
};

class TooFewObservationsError : public Error {
public:
    using Error::Error;
};

/// All candidate coefficients have a zero t statistic; the replication
/// bound is infinite.
class DegenerateTError : public Error {
public:
    using Error::Error;
};

class MissingColumnError : public Error {
public:
    explicit MissingColumnError(const std::string& column)
        : Error("missing column: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class EmptyFileError : public Error {
public:
    using Error::Error;
};

/// CSV cell failed to parse; carries the 1-based row and column of the cell.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " +
                std::to_string(column) + ")"),
          row_(row),
          column_(column) {}
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_ = 0;
    std::size_t column_ = 0;
};

}  // namespace collinlab
